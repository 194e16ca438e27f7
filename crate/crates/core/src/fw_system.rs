//! Method-of-lines integration of the two-component Fornberg-Whitham system
//!
//! ```text
//! u_t = -u u_x + Λ⁻¹∂ₓ(ρ - u)
//! ρ_t = -u ρ_x - ρ u_x
//! ```
//!
//! and of scalar linear transport `f_t + v f_x = F`, both with fixed-step
//! classical RK4 in time and dealiased pseudospectral products in space.

use crate::besov::{besov_norm, pair_norm, BesovIndex};
use crate::operators::inverse_helmholtz_dx;
use crate::spectral::{GridSpec, PeriodicFunction};
use crate::{Error, Result};

/// Velocity `u` and surface height `ρ` on a common grid.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub u: PeriodicFunction,
    pub rho: PeriodicFunction,
}

impl State {
    pub fn new(u: PeriodicFunction, rho: PeriodicFunction) -> Result<Self> {
        u.check_same_grid(&rho)?;
        Ok(Self { u, rho })
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        Self {
            u: PeriodicFunction::zeros(grid),
            rho: PeriodicFunction::zeros(grid),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.rho.is_finite()
    }

    /// `‖u‖_{B^s_{p,r}} + ‖ρ‖_{B^{s-1}_{p,r}}`.
    pub fn pair_norm(&self, idx: BesovIndex) -> Result<f64> {
        pair_norm(&self.u, &self.rho, idx)
    }

    /// Component-wise difference `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.u.check_same_grid(&other.u)?;
        Ok(Self {
            u: &self.u - &other.u,
            rho: &self.rho - &other.rho,
        })
    }
}

/// Vector-space operations needed by [`rk4`].
pub trait OdeState: Clone {
    /// `self + a · other`
    fn axpy(&self, a: f64, other: &Self) -> Self;
    fn all_finite(&self) -> bool;
}

impl OdeState for PeriodicFunction {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self + &other.scaled(a)
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for State {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        Self {
            u: self.u.axpy(a, &other.u),
            rho: self.rho.axpy(a, &other.rho),
        }
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// One classical RK4 step of `y' = f(t, y)` from `(t, y)`.
pub fn rk4<S, F>(y: &S, t: f64, dt: f64, mut f: F) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S) -> Result<S>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * dt, &y.axpy(0.5 * dt, &k1))?;
    let k3 = f(t + 0.5 * dt, &y.axpy(0.5 * dt, &k2))?;
    let k4 = f(t + dt, &y.axpy(dt, &k3))?;
    let next = y
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    if !next.all_finite() {
        return Err(Error::Overflow { time: t + dt });
    }
    Ok(next)
}

/// Time derivative of the system at `state`.
///
/// The three products `u u_x`, `u ρ_x`, `ρ u_x` share one set of inverse
/// transforms; each is dealiased exactly as [`PeriodicFunction::multiply`]
/// would.
pub fn rhs(state: &State) -> State {
    let grid = state.grid();
    let u = state.u.dealiased();
    let rho = state.rho.dealiased();
    let u_vals = u.synthesize();
    let ux_vals = u.derivative().synthesize();
    let rho_vals = rho.synthesize();
    let rhox_vals = rho.derivative().synthesize();

    let n = grid.len();
    let mut adv_u = Vec::with_capacity(n);
    let mut flux_rho = Vec::with_capacity(n);
    for k in 0..n {
        adv_u.push(-u_vals[k] * ux_vals[k]);
        flux_rho.push(-(u_vals[k] * rhox_vals[k] + rho_vals[k] * ux_vals[k]));
    }
    let adv_u = PeriodicFunction::analyze(&adv_u, grid).expect("grid-sized buffer").dealiased();
    let flux_rho = PeriodicFunction::analyze(&flux_rho, grid).expect("grid-sized buffer").dealiased();

    let coupling = inverse_helmholtz_dx(&(&state.rho - &state.u));
    State {
        u: &adv_u + &coupling,
        rho: flux_rho,
    }
}

/// One RK4 step of the system.
pub fn rk4_step(state: &State, dt: f64) -> Result<State> {
    check_step(dt)?;
    rk4(state, 0.0, dt, |_, s| Ok(rhs(s)))
}

fn check_step(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub grid: GridSpec,
    /// Upper bound on the step; each interval between sample times is
    /// split into the fewest equal steps not exceeding it.
    pub dt: f64,
    pub t_end: f64,
    pub sample_times: Vec<f64>,
    /// Abort once the guard norm exceeds this multiple of its initial value.
    pub blowup_factor: f64,
    pub guard_index: BesovIndex,
    /// Steps between guard-norm evaluations (also checked at sample times).
    pub guard_every: usize,
}

impl SolverConfig {
    pub const DEFAULT_BLOWUP_FACTOR: f64 = 4.0;

    pub fn new(grid: &GridSpec, dt: f64, t_end: f64, sample_times: Vec<f64>) -> Result<Self> {
        let config = Self {
            grid: grid.clone(),
            dt,
            t_end,
            sample_times,
            blowup_factor: Self::DEFAULT_BLOWUP_FACTOR,
            guard_index: BesovIndex::sobolev(3.0),
            guard_every: 10,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_guard(mut self, index: BesovIndex, factor: f64) -> Result<Self> {
        self.guard_index = index;
        self.blowup_factor = factor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_step(self.dt)?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) || self.dt > self.t_end {
            return Err(Error::Parameter(format!(
                "need 0 < dt <= t_end, got dt = {} and t_end = {}",
                self.dt, self.t_end
            )));
        }
        if !(self.blowup_factor > 1.0) {
            return Err(Error::Parameter(format!("blow-up factor must exceed 1, got {}", self.blowup_factor)));
        }
        if self.guard_every == 0 {
            return Err(Error::Parameter("guard interval must be at least one step".into()));
        }
        let mut prev = f64::NEG_INFINITY;
        for &t in &self.sample_times {
            if !(0.0..=self.t_end).contains(&t) || t <= prev {
                return Err(Error::Parameter(format!(
                    "sample times must be strictly increasing within [0, {}]",
                    self.t_end
                )));
            }
            prev = t;
        }
        Ok(())
    }

    /// Interval end points in order, ending at `t_end`.
    fn landmarks(&self) -> Vec<f64> {
        let mut marks: Vec<f64> = self.sample_times.iter().copied().filter(|&t| t > 0.0).collect();
        if marks.last() != Some(&self.t_end) {
            marks.push(self.t_end);
        }
        marks
    }

    /// Number of steps and step size used on `[a, b]`.
    pub fn steps_between(&self, a: f64, b: f64) -> (usize, f64) {
        let steps = (((b - a) / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (steps, (b - a) / steps as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TrajectoryStatus {
    Completed,
    AbortedBlowup { time: f64 },
}

/// States recorded at the requested sample times.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S = State> {
    pub samples: Vec<(f64, S)>,
    pub status: TrajectoryStatus,
}

impl<S> Trajectory<S> {
    pub fn completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    /// Sample recorded at time `t` (exact match on the requested value).
    pub fn at(&self, t: f64) -> Option<&S> {
        self.samples.iter().find(|(ts, _)| *ts == t).map(|(_, s)| s)
    }
}

/// Shared fixed-step driver: sample landing, guard norm and overflow checks.
fn integrate<S, F, G>(state0: S, config: &SolverConfig, mut step: F, guard: G) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(&S, f64, f64) -> Result<S>,
    G: Fn(&S) -> Result<f64>,
{
    config.validate()?;
    // Zero data has no scale to compare against; only the overflow check applies.
    let limit = match guard(&state0)? {
        g0 if g0 > 0.0 => config.blowup_factor * g0,
        _ => f64::INFINITY,
    };
    let wanted = |t: f64| config.sample_times.contains(&t);

    let mut samples = Vec::with_capacity(config.sample_times.len());
    if wanted(0.0) {
        samples.push((0.0, state0.clone()));
    }
    let mut state = state0;
    let mut start = 0.0;
    for end in config.landmarks() {
        let (steps, h) = config.steps_between(start, end);
        for k in 0..steps {
            let t = start + k as f64 * h;
            state = step(&state, t, h)?;
            let last = k + 1 == steps;
            if last || (k + 1) % config.guard_every == 0 {
                let t_now = if last { end } else { t + h };
                if guard(&state)? > limit {
                    return Ok(Trajectory {
                        samples,
                        status: TrajectoryStatus::AbortedBlowup { time: t_now },
                    });
                }
            }
        }
        if wanted(end) {
            samples.push((end, state.clone()));
        }
        start = end;
    }
    Ok(Trajectory {
        samples,
        status: TrajectoryStatus::Completed,
    })
}

/// Integrates the system from `state0` to `config.t_end`.
///
/// Leaving the guaranteed-size regime (guard pair norm above
/// `blowup_factor` times its initial value) ends the run with
/// [`TrajectoryStatus::AbortedBlowup`]; non-finite values are an error.
pub fn solve(state0: &State, config: &SolverConfig) -> Result<Trajectory> {
    if state0.grid() != &config.grid {
        return Err(Error::Shape("initial state and solver grid differ".into()));
    }
    let idx = config.guard_index;
    integrate(
        state0.clone(),
        config,
        |s, t, h| rk4(s, t, h, |_, y| Ok(rhs(y))),
        |s| s.pair_norm(idx),
    )
}

/// `C / (‖u₀‖_{B^s} + ‖ρ₀‖_{B^{s-1}})²`; infinite for zero data.
pub fn lifespan_estimate(u0: &PeriodicFunction, rho0: &PeriodicFunction, idx: BesovIndex, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter(format!("lifespan constant must be positive, got {c}")));
    }
    let size = pair_norm(u0, rho0, idx)?;
    if size == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(c / (size * size))
}

/// Integrates `f_t + v(t) f_x = F(t)` from `f0`.
///
/// The guard uses `‖f‖_{B^s_{p,r}}` at `config.guard_index`.
pub fn solve_linear_transport<V, F>(
    velocity: V,
    forcing: F,
    f0: &PeriodicFunction,
    config: &SolverConfig,
) -> Result<Trajectory<PeriodicFunction>>
where
    V: Fn(f64) -> PeriodicFunction,
    F: Fn(f64) -> PeriodicFunction,
{
    if f0.grid() != &config.grid {
        return Err(Error::Shape("initial data and solver grid differ".into()));
    }
    let idx = config.guard_index;
    let field = |t: f64, f: &PeriodicFunction| -> Result<PeriodicFunction> {
        let advection = velocity(t).multiply(&f.derivative())?;
        let source = forcing(t);
        source.check_same_grid(f)?;
        Ok(&source - &advection)
    };
    integrate(
        f0.clone(),
        config,
        |s, t, h| rk4(s, t, h, field),
        |s| besov_norm(s, idx),
    )
}
