//! Explicit high-frequency families
//!
//! ```text
//! u^{ω,n} = -ω/n + n^{-s} sin(nx + ωt)
//! ρ^{ω,n} =  1/n + n^{-s} sin(nx + ωt),      ω = ±1
//! ```
//!
//! whose initial data converge together as `n → ∞` while the members stay
//! `~|sin t|` apart, together with their residuals in the system and the
//! norm brackets for `sin(nx)`, `cos(nx)`.
//!
//! Everything here is built from exact trigonometric terms; no sampling.

use crate::besov::{besov_norm, BesovIndex};
use crate::fw_system::{rhs, State};
use crate::spectral::{GridSpec, PeriodicFunction, TrigTerm};
use crate::{Error, Result};

/// Selects one member `(ω, n)` of the families at smoothness `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceParams {
    pub omega: i8,
    pub n: u32,
    pub s: f64,
}

impl SequenceParams {
    /// `ω ∈ {-1, 1}`, `n ≥ 2`, `s > 5/2`.
    pub fn new(omega: i8, n: u32, s: f64) -> Result<Self> {
        if omega != 1 && omega != -1 {
            return Err(Error::Parameter(format!("omega must be +1 or -1, got {omega}")));
        }
        if n < 2 {
            return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
        }
        if !(s > 2.5 && s.is_finite()) {
            return Err(Error::Parameter(format!("s must exceed 5/2, got {s}")));
        }
        Ok(Self { omega, n, s })
    }

    /// Whether `s > max(2 + 1/p, 5/2)`.
    pub fn admissible_for(&self, p: f64) -> bool {
        self.s > (2.0 + 1.0 / p).max(2.5)
    }

    fn omega_f(&self) -> f64 {
        self.omega as f64
    }

    /// `n^{-s}`
    pub fn amplitude(&self) -> f64 {
        (self.n as f64).powf(-self.s)
    }

    /// Phase `ωt` of the travelling profile.
    fn phase(&self, t: f64) -> f64 {
        self.omega_f() * t
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        // the residuals live on mode 2n, which must survive dealiasing
        if 3 * 2 * self.n as usize >= grid.len() {
            return Err(Error::Resolution(format!(
                "need 2n < N/3, got n = {} on an N = {} grid",
                self.n,
                grid.len()
            )));
        }
        Ok(())
    }
}

/// `(u^{ω,n}(t), ρ^{ω,n}(t))`.
pub fn approximate_state(params: &SequenceParams, t: f64, grid: &GridSpec) -> Result<State> {
    params.check_grid(grid)?;
    let nf = params.n as f64;
    let wave = TrigTerm::sin(params.amplitude(), params.n, params.phase(t));
    let u = PeriodicFunction::from_terms(&[TrigTerm::constant(-params.omega_f() / nf), wave], grid)?;
    let rho = PeriodicFunction::from_terms(&[TrigTerm::constant(1.0 / nf), wave], grid)?;
    State::new(u, rho)
}

/// `(u⁰_{ω,n}, ρ⁰_{ω,n})`, the families at `t = 0`.
pub fn initial_state(params: &SequenceParams, grid: &GridSpec) -> Result<State> {
    approximate_state(params, 0.0, grid)
}

/// Exact `∂ₜ` of the approximate state: `ω n^{-s} cos(nx + ωt)` in both
/// components.
pub fn time_derivative(params: &SequenceParams, t: f64, grid: &GridSpec) -> Result<State> {
    params.check_grid(grid)?;
    let term = TrigTerm::cos(params.omega_f() * params.amplitude(), params.n, params.phase(t));
    let d = PeriodicFunction::from_terms(&[term], grid)?;
    State::new(d.clone(), d)
}

/// Closed forms
///
/// ```text
/// R₁ = sin(2(nx + ωt)) / (2 n^{2s-1})
/// R₂ = n^{-s} cos(nx + ωt) + sin(2(nx + ωt)) / n^{2s-1}
/// ```
pub fn residuals_closed_form(params: &SequenceParams, t: f64, grid: &GridSpec) -> Result<(PeriodicFunction, PeriodicFunction)> {
    params.check_grid(grid)?;
    let nf = params.n as f64;
    let quad = nf.powf(1.0 - 2.0 * params.s);
    let phase2 = 2.0 * params.phase(t);
    let r1 = PeriodicFunction::from_terms(&[TrigTerm::sin(0.5 * quad, 2 * params.n, phase2)], grid)?;
    let r2 = PeriodicFunction::from_terms(
        &[
            TrigTerm::cos(params.amplitude(), params.n, params.phase(t)),
            TrigTerm::sin(quad, 2 * params.n, phase2),
        ],
        grid,
    )?;
    Ok((r1, r2))
}

/// Residuals computed numerically: exact `∂ₜ` minus the solver's
/// right-hand side evaluated on the approximate state.
pub fn residual_defect(params: &SequenceParams, t: f64, grid: &GridSpec) -> Result<(PeriodicFunction, PeriodicFunction)> {
    residual_defect_with(params, t, grid, rhs)
}

/// [`residual_defect`] against an arbitrary right-hand side.
pub fn residual_defect_with<F>(params: &SequenceParams, t: f64, grid: &GridSpec, field: F) -> Result<(PeriodicFunction, PeriodicFunction)>
where
    F: Fn(&State) -> State,
{
    let state = approximate_state(params, t, grid)?;
    let dt = time_derivative(params, t, grid)?;
    let f = field(&state);
    Ok((&dt.u - &f.u, &dt.rho - &f.rho))
}

/// Bracket constants for `‖sin(nx)‖`, `‖cos(nx)‖` in `B^γ_{p,r}` (upper)
/// and `B^s_{p,r}` (lower), before the Lᵖ constant of the wave:
///
/// ```text
/// upper = log₂(32/9)^{1/r} (4/3)^γ,    lower = log₂(9/8)^{1/r} (3/8)^s
/// ```
///
/// For `r = ∞` the logarithmic factors are 1.
pub fn bound_constants(gamma: f64, s: f64, r: f64) -> (f64, f64) {
    let inv_r = if r.is_infinite() { 0.0 } else { 1.0 / r };
    let upper = (32.0f64 / 9.0).log2().powf(inv_r) * (4.0f64 / 3.0).powf(gamma);
    let lower = (9.0f64 / 8.0).log2().powf(inv_r) * (3.0f64 / 8.0).powf(s);
    (upper, lower)
}

/// `2 n^{-s} (‖cos nx‖_{B^s_{p,r}} + ‖cos nx‖_{B^{s-1}_{p,r}}) |sin t|`: the
/// separation of the two families in the pair norm, oscillating part only.
pub fn predicted_distance(n: u32, s: f64, idx: BesovIndex, t: f64, grid: &GridSpec) -> Result<f64> {
    SequenceParams::new(1, n, s)?.check_grid(grid)?;
    let wave = PeriodicFunction::from_terms(&[TrigTerm::cos(1.0, n, 0.0)], grid)?;
    let idx = idx.with_s(s);
    let norms = besov_norm(&wave, idx)? + besov_norm(&wave, idx.shifted(-1.0))?;
    Ok(2.0 * (n as f64).powf(-s) * norms * t.sin().abs())
}
