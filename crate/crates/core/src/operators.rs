//! Fourier multipliers and an empirical probe of their norms between Besov
//! spaces.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::besov::{besov_norm, BesovIndex};
use crate::spectral::{GridSpec, PeriodicFunction};
use crate::{Error, Result};

type Symbol = dyn Fn(i64) -> Complex64 + Send + Sync;

/// A Fourier multiplier `û_j ↦ m(j) û_j`. Symbols are expected to satisfy
/// `m(-j) = conj(m(j))`; the output is projected onto real functions
/// regardless.
#[derive(Clone)]
pub struct Multiplier {
    name: &'static str,
    symbol: Arc<Symbol>,
}

impl Multiplier {
    pub fn new<F>(name: &'static str, symbol: F) -> Self
    where
        F: Fn(i64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name,
            symbol: Arc::new(symbol),
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", |_| Complex64::new(1.0, 0.0))
    }

    /// `∂ₓ`, symbol `ij`.
    pub fn derivative() -> Self {
        Self::new("dx", |j| Complex64::new(0.0, j as f64))
    }

    /// `Λ⁻¹ = (1 - ∂ₓ²)⁻¹`, symbol `1 / (1 + j²)`.
    pub fn inverse_helmholtz() -> Self {
        Self::new("inv_helmholtz", |j| Complex64::new(1.0 / (1.0 + (j * j) as f64), 0.0))
    }

    /// `Λ⁻¹∂ₓ`, symbol `ij / (1 + j²)`.
    pub fn inverse_helmholtz_dx() -> Self {
        Self::new("inv_helmholtz_dx", |j| {
            let jf = j as f64;
            Complex64::new(0.0, jf / (1.0 + jf * jf))
        })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn symbol(&self, j: i64) -> Complex64 {
        (self.symbol)(j)
    }

    /// Largest `|m(j) - conj(m(-j))|` over `|j| ≤ max_mode`.
    pub fn hermitian_defect(&self, max_mode: i64) -> f64 {
        (0..=max_mode)
            .map(|j| (self.symbol(j) - self.symbol(-j).conj()).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier").field("name", &self.name).finish()
    }
}

pub fn apply_multiplier(f: &PeriodicFunction, m: &Multiplier) -> PeriodicFunction {
    f.map_modes(|j, c| m.symbol(j) * c)
}

/// `Λ⁻¹∂ₓ f`. Constants map to zero.
pub fn inverse_helmholtz_dx(f: &PeriodicFunction) -> PeriodicFunction {
    // Inlined symbol: this sits on the solver's hot path.
    f.map_modes(|j, c| {
        let jf = j as f64;
        let w = jf / (1.0 + jf * jf);
        Complex64::new(-w * c.im, w * c.re)
    })
}

/// Settings for [`operator_ratio`].
#[derive(Clone, Debug)]
pub struct RatioProbe {
    pub grid: GridSpec,
    pub trials: usize,
    pub seed: u64,
    /// Highest mode of the random trial functions; defaults to `N/4`.
    pub max_mode: Option<usize>,
}

impl RatioProbe {
    pub fn new(grid: &GridSpec, trials: usize, seed: u64) -> Self {
        Self {
            grid: grid.clone(),
            trials,
            seed,
            max_mode: None,
        }
    }
}

/// Largest observed `‖m h‖_{to} / ‖h‖_{from}` over seeded random band-limited
/// `h` with unit `from`-norm.
///
/// Trial `k` draws its coefficients from an independent ChaCha stream
/// `(seed, k)`, so the result does not depend on scheduling.
pub fn operator_ratio(m: &Multiplier, from: BesovIndex, to: BesovIndex, probe: &RatioProbe) -> Result<f64> {
    if probe.trials == 0 {
        return Err(Error::Parameter("operator_ratio needs at least one trial".into()));
    }
    let max_mode = probe.max_mode.unwrap_or(probe.grid.len() / 4);
    let ratios = (0..probe.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(probe.seed);
            rng.set_stream(k as u64);
            let h = PeriodicFunction::random(&probe.grid, max_mode, &mut rng)?;
            let h = h.scaled(1.0 / besov_norm(&h, from)?);
            besov_norm(&apply_multiplier(&h, m), to)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::besov::dyadic_block;
    use crate::spectral::TrigTerm;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    fn trig(g: &GridSpec, terms: &[TrigTerm]) -> PeriodicFunction {
        PeriodicFunction::from_terms(terms, g).unwrap()
    }

    #[test]
    fn identity_and_derivative_symbols() {
        let g = grid(64);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = PeriodicFunction::random(&g, 20, &mut rng).unwrap();
        assert_eq!(apply_multiplier(&f, &Multiplier::identity()), f);
        let d = apply_multiplier(&f, &Multiplier::derivative());
        assert!(d.sup_distance(&f.derivative()).unwrap() <= 1e-12);
    }

    #[test]
    fn inverse_helmholtz_single_mode() {
        let g = grid(64);
        let f = trig(&g, &[TrigTerm::cos(1.0, 2, 0.0)]);
        let out = apply_multiplier(&f, &Multiplier::inverse_helmholtz());
        assert!(out.sup_distance(&f.scaled(0.2)).unwrap() < 1e-16);
    }

    #[test]
    fn inverse_helmholtz_dx_examples() {
        let g = grid(64);
        let c = PeriodicFunction::constant(&g, 2.5);
        assert_eq!(inverse_helmholtz_dx(&c), PeriodicFunction::zeros(&g));

        let out = inverse_helmholtz_dx(&trig(&g, &[TrigTerm::sin(1.0, 4, 0.0)]));
        let expected = trig(&g, &[TrigTerm::cos(4.0 / 17.0, 4, 0.0)]);
        assert!(out.sup_distance(&expected).unwrap() < 1e-16);

        let out = inverse_helmholtz_dx(&trig(&g, &[TrigTerm::sin(1.0, 1, 0.0)]));
        let expected = trig(&g, &[TrigTerm::cos(0.5, 1, 0.0)]);
        assert!(out.sup_distance(&expected).unwrap() < 1e-16);
    }

    #[test]
    fn fast_path_matches_generic_multiplier() {
        let g = grid(128);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = PeriodicFunction::random(&g, 60, &mut rng).unwrap();
        let generic = apply_multiplier(&f, &Multiplier::inverse_helmholtz_dx());
        assert!(inverse_helmholtz_dx(&f).sup_distance(&generic).unwrap() < 1e-15);
    }

    #[test]
    fn symbols_are_hermitian_and_bounded() {
        for m in [Multiplier::identity(), Multiplier::derivative(), Multiplier::inverse_helmholtz(), Multiplier::inverse_helmholtz_dx()] {
            assert_eq!(m.hermitian_defect(5000), 0.0, "{}", m.name());
        }
        let m = Multiplier::inverse_helmholtz_dx();
        for j in -5000..=5000 {
            assert!(m.symbol(j).norm() <= 0.5);
        }
    }

    #[test]
    fn blocks_commute_with_multipliers() {
        let g = grid(256);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = PeriodicFunction::random(&g, 80, &mut rng).unwrap();
        for m in [Multiplier::derivative(), Multiplier::inverse_helmholtz_dx()] {
            for q in -1..7 {
                let a = dyadic_block(&apply_multiplier(&f, &m), q);
                let b = apply_multiplier(&dyadic_block(&f, q), &m);
                assert!(a.sup_distance(&b).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn real_input_stays_real() {
        let g = grid(128);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = PeriodicFunction::random(&g, 40, &mut rng).unwrap();
        let out = inverse_helmholtz_dx(&f);
        let mut buf: Vec<Complex64> = out.coeffs().to_vec();
        rustfft::FftPlanner::new().plan_fft_inverse(128).process(&mut buf);
        let residue = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(residue <= 1e-13);
    }

    #[test]
    fn identity_ratio_is_one() {
        let g = grid(128);
        let idx = BesovIndex::sobolev(2.0);
        let r = operator_ratio(&Multiplier::identity(), idx, idx, &RatioProbe::new(&g, 10, 3)).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ratio_requires_trials() {
        let g = grid(64);
        let idx = BesovIndex::sobolev(1.0);
        assert!(operator_ratio(&Multiplier::identity(), idx, idx, &RatioProbe::new(&g, 0, 3)).is_err());
    }

    #[test]
    fn smoothing_ratio_is_seed_stable() {
        let g = grid(512);
        let to = BesovIndex::sobolev(3.0);
        let from = to.shifted(-1.0);
        let m = Multiplier::inverse_helmholtz_dx();
        let a = operator_ratio(&m, from, to, &RatioProbe::new(&g, 200, 1)).unwrap();
        let b = operator_ratio(&m, from, to, &RatioProbe::new(&g, 200, 2)).unwrap();
        assert!(a <= 10.0 && b <= 10.0);
        assert!((a / b - 1.0).abs() <= 0.1, "{a} vs {b}");
    }

    #[test]
    fn derivative_ratio_grows_with_bandwidth() {
        let idx = BesovIndex::sobolev(3.0);
        let m = Multiplier::derivative();
        let mut prev = 0.0;
        for n in [64usize, 256, 1024] {
            let g = grid(n);
            let r = operator_ratio(&m, idx, idx, &RatioProbe::new(&g, 20, 5)).unwrap();
            assert!(r > 2.0 * prev, "N = {n}: {r} after {prev}");
            prev = r;
        }
    }
}
