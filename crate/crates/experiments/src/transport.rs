//! Fitted growth constant for linear transport,
//! `‖f(t)‖_{B^s} ≤ e^{C V(t)} (‖f₀‖_{B^s} + ∫₀ᵗ e^{-C V(τ)} ‖F(τ)‖_{B^s} dτ)` with
//! `V(t) = ∫₀ᵗ ‖∂ₓv‖_{B^{s-1}}`.
//!
//! Each family member has a single-mode velocity normalized so that
//! `‖∂ₓv‖_{B^{s-1}} = 1` (hence `V(t) = t`), and initial data and a
//! time-independent forcing drawn on modes `1..=4`. The fitted `C` of a
//! member is the smallest constant for which the bound holds at every
//! sample time.

use besovfw::besov::besov_norm;
use besovfw::fw_system::solve_linear_transport;
use besovfw::{BesovIndex, GridSpec, PeriodicFunction, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExperimentError, Result};

#[derive(Clone, Debug)]
pub struct TransportFamily {
    pub index: BesovIndex,
    pub members: usize,
    pub seed: u64,
    pub grid_n: usize,
    pub dt: f64,
    pub sample_times: Vec<f64>,
    pub data_modes: usize,
}

impl TransportFamily {
    pub fn new(index: BesovIndex, seed: u64) -> Self {
        Self {
            index,
            members: 5,
            seed,
            grid_n: 512,
            dt: 1e-3,
            sample_times: (1..=10).map(|k| 0.2 * k as f64).collect(),
            data_modes: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportFit {
    pub constants: Vec<f64>,
    pub mean: f64,
    /// `max_k |C_k / mean - 1|`.
    pub max_deviation: f64,
}

struct Member {
    velocity: PeriodicFunction,
    forcing: PeriodicFunction,
    f0: PeriodicFunction,
}

fn unit(f: PeriodicFunction, idx: BesovIndex) -> Result<PeriodicFunction> {
    let norm = besov_norm(&f, idx)?;
    Ok(f.scaled(1.0 / norm))
}

fn draw(family: &TransportFamily, k: usize, grid: &GridSpec) -> Result<Member> {
    let mut rng = ChaCha8Rng::seed_from_u64(family.seed);
    rng.set_stream(k as u64);
    let idx = family.index;
    let v = PeriodicFunction::random(grid, 1, &mut rng)?;
    let v = &v - &PeriodicFunction::constant(grid, v.mean());
    let velocity = v.scaled(1.0 / besov_norm(&v.derivative(), idx.shifted(-1.0))?);
    let f0 = unit(PeriodicFunction::random(grid, family.data_modes, &mut rng)?, idx)?;
    let weight: f64 = rng.random_range(0.0..1.0);
    let forcing = unit(PeriodicFunction::random(grid, family.data_modes, &mut rng)?, idx)?.scaled(weight);
    Ok(Member { velocity, forcing, f0 })
}

/// Bound with `V(t) = t`, unit `‖f₀‖` and constant forcing norm `phi`.
fn bound(c: f64, t: f64, phi: f64) -> f64 {
    let integral = if c == 0.0 { t } else { (1.0 - (-c * t).exp()) / c };
    (c * t).exp() * (1.0 + phi * integral)
}

fn fit_member(family: &TransportFamily, k: usize, grid: &GridSpec) -> Result<f64> {
    let m = draw(family, k, grid)?;
    let t_end = *family.sample_times.last().unwrap();
    let config = SolverConfig::new(grid, family.dt, t_end, family.sample_times.clone())?.with_guard(family.index, 1e12)?;
    let traj = solve_linear_transport(|_| m.velocity.clone(), |_| m.forcing.clone(), &m.f0, &config)?;
    if !traj.completed() {
        return Err(ExperimentError::Config(format!("transport member {k} exceeded its guard")));
    }
    let phi = besov_norm(&m.forcing, family.index)?;
    let norms = traj
        .samples
        .iter()
        .map(|(t, f)| Ok((*t, besov_norm(f, family.index)?)))
        .collect::<Result<Vec<_>>>()?;
    let holds = |c: f64| norms.iter().all(|&(t, n)| n <= bound(c, t, phi));
    if holds(0.0) {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while !holds(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn fit_transport_constants(family: &TransportFamily) -> Result<TransportFit> {
    if family.members == 0 {
        return Err(ExperimentError::Config("transport family needs members".into()));
    }
    let grid = GridSpec::new(family.grid_n)?;
    let constants = (0..family.members)
        .into_par_iter()
        .map(|k| fit_member(family, k, &grid))
        .collect::<Result<Vec<f64>>>()?;
    let mean = constants.iter().sum::<f64>() / constants.len() as f64;
    let max_deviation = constants.iter().map(|c| (c / mean - 1.0).abs()).fold(0.0, f64::max);
    Ok(TransportFit {
        constants,
        mean,
        max_deviation,
    })
}
