//! Solver runs from the approximate-solution initial data, one per `(n, ω)`.

use besovfw::approx_sequences::initial_state;
use besovfw::fw_system::solve;
use besovfw::{SequenceParams, SolverConfig, Trajectory, TrajectoryStatus};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::Blowup;

pub const OMEGAS: [i8; 2] = [1, -1];

#[derive(Clone, Debug)]
pub struct FamilySolve {
    pub params: SequenceParams,
    pub trajectory: Trajectory,
}

/// All solver runs needed by the solver-based experiments, sorted by `(n, ω)`.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub runs: Vec<FamilySolve>,
}

impl Sweep {
    pub fn run(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let solver = SolverConfig::new(&grid, config.dt, config.t_end(), config.times.clone())?
            .with_guard(config.index(), config.blowup_factor)?;
        let jobs: Vec<SequenceParams> = config
            .solver_ns()
            .into_iter()
            .flat_map(|n| OMEGAS.map(|omega| SequenceParams::new(omega, n, config.s)))
            .collect::<besovfw::Result<_>>()?;
        let runs = jobs
            .into_par_iter()
            .map(|params| {
                let state0 = initial_state(&params, &grid)?;
                let trajectory = solve(&state0, &solver)?;
                Ok(FamilySolve { params, trajectory })
            })
            .collect::<besovfw::Result<Vec<_>>>()?;
        Ok(Self { runs })
    }

    pub fn get(&self, n: u32, omega: i8) -> Option<&FamilySolve> {
        self.runs.iter().find(|r| r.params.n == n && r.params.omega == omega)
    }

    pub fn blowups(&self) -> Vec<Blowup> {
        self.runs
            .iter()
            .filter_map(|r| match r.trajectory.status {
                TrajectoryStatus::AbortedBlowup { time } => Some(Blowup {
                    n: r.params.n,
                    omega: r.params.omega,
                    time,
                }),
                TrajectoryStatus::Completed => None,
            })
            .collect()
    }
}
