//! Dyadic partition of unity, periodic Littlewood-Paley blocks and Besov
//! norms on the torus.
//!
//! The cutoff is the standard smooth step
//!
//! ```text
//! χ(ξ) = g(4/3 - |ξ|) / (g(4/3 - |ξ|) + g(|ξ| - 3/4)),   g(x) = e^{-1/x} for x > 0, else 0
//! ```
//!
//! so `χ = 1` on `[-3/4, 3/4]` and `χ = 0` outside `(-4/3, 4/3)`. Blocks are
//! `φ_{-1} = χ`, `φ_q(ξ) = χ(2^{-q-1}ξ) - χ(2^{-q}ξ)` for `q ≥ 0`, evaluated
//! at `|j|` on Fourier modes. Each `φ_q` with `q ≥ 0` is supported in
//! `[3/4·2^q, 8/3·2^q]` and equals 1 on `[4/3·2^q, 3/2·2^q]`.

use std::f64::consts::PI;

use crate::spectral::{check_lebesgue_exponent, PeriodicFunction};
use crate::{Error, Result};

/// Smoothness `s`, integrability `p` and summability `r` of a Besov space
/// `B^s_{p,r}`. `p` and `r` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        check_lebesgue_exponent(p)?;
        if r.is_nan() || r < 1.0 {
            return Err(Error::Parameter(format!("summability index must be >= 1, got {r}")));
        }
        if !s.is_finite() {
            return Err(Error::Parameter(format!("smoothness must be finite, got {s}")));
        }
        Ok(Self { s, p, r })
    }

    /// `B^s_{2,2}`, equivalent to the Sobolev space `H^s`.
    pub fn sobolev(s: f64) -> Self {
        Self { s, p: 2.0, r: 2.0 }
    }

    /// Same `p`, `r` with smoothness `s`.
    pub fn with_s(self, s: f64) -> Self {
        Self { s, ..self }
    }

    /// Same `p`, `r` with smoothness shifted by `ds`.
    pub fn shifted(self, ds: f64) -> Self {
        Self { s: self.s + ds, ..self }
    }
}

/// The partition of unity `{φ_q}_{q ≥ -1}` built on [`DyadicPartition::chi`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyadicPartition;

impl DyadicPartition {
    pub const INNER: f64 = 3.0 / 4.0;
    pub const OUTER: f64 = 4.0 / 3.0;

    pub fn chi(xi: f64) -> f64 {
        let a = xi.abs();
        if a <= Self::INNER {
            1.0
        } else if a >= Self::OUTER {
            0.0
        } else {
            let up = smooth_step_kernel(Self::OUTER - a);
            let down = smooth_step_kernel(a - Self::INNER);
            up / (up + down)
        }
    }

    /// `φ_q(ξ)`; zero for `q < -1`.
    pub fn phi(q: i32, xi: f64) -> f64 {
        match q {
            q if q < -1 => 0.0,
            -1 => Self::chi(xi),
            q => {
                let x = xi * (-q as f64).exp2();
                Self::chi(0.5 * x) - Self::chi(x)
            }
        }
    }

    /// Closed interval of `|ξ|` outside which `φ_q` vanishes.
    pub fn support(q: i32) -> (f64, f64) {
        if q == -1 {
            (0.0, Self::OUTER)
        } else {
            let scale = (q as f64).exp2();
            (Self::INNER * scale, 2.0 * Self::OUTER * scale)
        }
    }

    /// Integer `|j|` that may carry a nonzero `φ_q(|j|)`.
    pub fn mode_range(q: i32) -> std::ops::RangeInclusive<u64> {
        let (lo, hi) = Self::support(q);
        (lo.ceil() as u64)..=(hi.floor() as u64)
    }

    /// Largest block index whose support starts below the Nyquist mode of an
    /// `n`-point grid.
    pub fn q_max(n: usize) -> i32 {
        let half = (n / 2) as f64;
        let mut q = -1;
        while Self::support(q + 1).0 < half {
            q += 1;
        }
        q
    }
}

fn smooth_step_kernel(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `φ_q(ξ)` for `q ≥ -1`, using `|ξ|`.
pub fn phi_eval(q: i32, xi: f64) -> f64 {
    DyadicPartition::phi(q, xi)
}

/// Periodic dyadic block `Δ_q f`: `û_j ↦ φ_q(|j|) û_j`.
pub fn dyadic_block(f: &PeriodicFunction, q: i32) -> PeriodicFunction {
    f.map_modes(|j, c| c * DyadicPartition::phi(q, j.unsigned_abs() as f64))
}

/// `‖Δ_q f‖_{Lᵖ}` for `q = -1..=q_max`, stored at index `q + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockNorms {
    norms: Vec<f64>,
}

impl BlockNorms {
    pub fn get(&self, q: i32) -> f64 {
        usize::try_from(q + 1)
            .ok()
            .and_then(|i| self.norms.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.norms.iter().enumerate().map(|(i, &b)| (i as i32 - 1, b))
    }

    pub fn nonzero_count(&self) -> usize {
        self.norms.iter().filter(|&&b| b > 0.0).count()
    }

    /// `‖(2^{sq} ‖Δ_q f‖)_q‖_{ℓʳ}`.
    pub fn besov(&self, s: f64, r: f64) -> f64 {
        let weighted = self.iter().map(|(q, b)| (s * q as f64).exp2() * b);
        if r.is_infinite() {
            weighted.fold(0.0, f64::max)
        } else if r == 1.0 {
            weighted.sum()
        } else if r == 2.0 {
            weighted.map(|w| w * w).sum::<f64>().sqrt()
        } else {
            weighted.map(|w| w.powf(r)).sum::<f64>().powf(1.0 / r)
        }
    }
}

/// Relative energy above `N/3` tolerated by the norm routines.
const TOP_OCTAVE_TOLERANCE: f64 = 1e-24;

fn check_top_octave(f: &PeriodicFunction) -> Result<()> {
    let n = f.grid().len() as u64;
    let (mut total, mut top) = (0.0, 0.0);
    for (j, c) in f.modes() {
        let e = c.norm_sqr();
        total += e;
        if 3 * j.unsigned_abs() > n {
            top += e;
        }
    }
    if top > TOP_OCTAVE_TOLERANCE * total {
        return Err(Error::Resolution(format!(
            "function carries relative energy {:.3e} above N/3 on an N = {n} grid",
            top / total
        )));
    }
    Ok(())
}

/// Lᵖ norms of all dyadic blocks of `f`.
pub fn block_norms(f: &PeriodicFunction, p: f64) -> Result<BlockNorms> {
    check_lebesgue_exponent(p)?;
    check_top_octave(f)?;
    let q_max = DyadicPartition::q_max(f.grid().len());
    let top = f.grid().max_mode() as u64;
    let mut norms = Vec::with_capacity((q_max + 2) as usize);
    for q in -1..=q_max {
        let range = DyadicPartition::mode_range(q);
        let (lo, hi) = (*range.start(), (*range.end()).min(top));
        if p == 2.0 {
            let mut energy = 0.0;
            for m in lo..=hi {
                let w = DyadicPartition::phi(q, m as f64);
                if w == 0.0 {
                    continue;
                }
                let mut e = f.coeff(m as i64).norm_sqr();
                if m != 0 {
                    e += f.coeff(-(m as i64)).norm_sqr();
                }
                energy += w * w * e;
            }
            norms.push((2.0 * PI * energy).sqrt());
        } else {
            let active = (lo..=hi).any(|m| f.coeff(m as i64).norm_sqr() > 0.0 && DyadicPartition::phi(q, m as f64) > 0.0);
            norms.push(if active { dyadic_block(f, q).lp_norm(p)? } else { 0.0 });
        }
    }
    Ok(BlockNorms { norms })
}

/// `‖f‖_{B^s_{p,r}}`.
///
/// Fails with [`Error::Resolution`] when `f` has energy above `N/3`, where
/// the grid would truncate the blocks.
pub fn besov_norm(f: &PeriodicFunction, idx: BesovIndex) -> Result<f64> {
    Ok(block_norms(f, idx.p)?.besov(idx.s, idx.r))
}

/// `‖u‖_{B^s_{p,r}} + ‖ρ‖_{B^{s-1}_{p,r}}`.
pub fn pair_norm(u: &PeriodicFunction, rho: &PeriodicFunction, idx: BesovIndex) -> Result<f64> {
    u.check_same_grid(rho)?;
    Ok(besov_norm(u, idx)? + besov_norm(rho, idx.shifted(-1.0))?)
}

/// `sqrt(2π Σ_j (1 + j²)^s |û_j|²)`.
pub fn sobolev_norm(f: &PeriodicFunction, s: f64) -> f64 {
    let sum: f64 = f
        .modes()
        .map(|(j, c)| (1.0 + (j * j) as f64).powf(s) * c.norm_sqr())
        .sum();
    (2.0 * PI * sum).sqrt()
}

/// Range of `‖·‖_{B^s_{2,2}} / ‖·‖_{H^s}` over functions with modes
/// `|j| ≤ max_mode`, found by enumerating single modes (the squared ratio
/// of a general function is a convex combination of the single-mode ones).
pub fn sobolev_equivalence_bracket(s: f64, max_mode: u64) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for m in 0..=max_mode {
        let xi = m as f64;
        let mut weight = 0.0;
        let mut q = -1;
        loop {
            let (start, _) = DyadicPartition::support(q);
            if q >= 0 && start > xi {
                break;
            }
            let phi = DyadicPartition::phi(q, xi);
            weight += (2.0 * s * q as f64).exp2() * phi * phi;
            q += 1;
        }
        let ratio = (weight / (1.0 + xi * xi).powf(s)).sqrt();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{GridSpec, TrigTerm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    fn sin_n(g: &GridSpec, n: u32, phase: f64) -> PeriodicFunction {
        PeriodicFunction::from_terms(&[TrigTerm::sin(1.0, n, phase)], g).unwrap()
    }

    fn cos_n(g: &GridSpec, n: u32) -> PeriodicFunction {
        PeriodicFunction::from_terms(&[TrigTerm::cos(1.0, n, 0.0)], g).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_eval(-1, 0.0), 1.0);
        assert_eq!(phi_eval(3, 11.0), 1.0);
        assert_eq!(phi_eval(3, 10.7), 1.0);
        assert_eq!(phi_eval(3, 12.0), 1.0);
        assert_eq!(phi_eval(3, 5.9), 0.0);
        assert_eq!(phi_eval(3, 21.4), 0.0);
        assert_eq!(phi_eval(-2, 1.0), 0.0);
        assert_eq!(phi_eval(2, -5.5), phi_eval(2, 5.5));
    }

    #[test]
    fn chi_shape() {
        assert_eq!(DyadicPartition::chi(0.75), 1.0);
        assert_eq!(DyadicPartition::chi(4.0 / 3.0), 0.0);
        let mut prev = 1.0;
        for k in 0..=1000 {
            let x = 0.7 + 0.7 * k as f64 / 1000.0;
            let c = DyadicPartition::chi(x);
            assert!((0.0..=1.0).contains(&c));
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn partition_of_unity_on_integers() {
        for j in 0..=2048u32 {
            let sum: f64 = (-1..=12).map(|q| phi_eval(q, j as f64)).sum();
            assert!((sum - 1.0).abs() <= 1e-14, "j = {j}: {sum}");
        }
    }

    #[test]
    fn support_and_plateau() {
        for q in 0..8 {
            let scale = (q as f64).exp2();
            for k in 0..=400 {
                let xi = 4.0 * scale * k as f64 / 400.0;
                let v = phi_eval(q, xi);
                if xi <= 0.75 * scale || xi >= 8.0 / 3.0 * scale {
                    assert_eq!(v, 0.0);
                }
                if (4.0 / 3.0 * scale..=1.5 * scale).contains(&xi) {
                    assert_eq!(v, 1.0);
                }
            }
        }
    }

    #[test]
    fn q_max_covers_grid() {
        assert_eq!(DyadicPartition::q_max(4096), 11);
        assert_eq!(DyadicPartition::q_max(64), 5);
        for n in [16usize, 64, 256, 1024] {
            let q = DyadicPartition::q_max(n);
            assert!(DyadicPartition::support(q + 1).0 >= (n / 2) as f64);
        }
    }

    #[test]
    fn block_of_constant() {
        let g = grid(64);
        let c = PeriodicFunction::constant(&g, 0.3);
        assert_eq!(dyadic_block(&c, -1), c);
        for q in 0..5 {
            assert_eq!(dyadic_block(&c, q), PeriodicFunction::zeros(&g));
        }
    }

    #[test]
    fn block_of_sine_is_scaled_sine() {
        let g = grid(128);
        for n in [3u32, 8, 11, 20] {
            let f = sin_n(&g, n, 0.0);
            for q in -1..6 {
                let expected = f.scaled(phi_eval(q, n as f64));
                assert!(dyadic_block(&f, q).sup_distance(&expected).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn sine_hits_one_or_two_blocks() {
        let g = grid(4096);
        for n in 2..=1300u32 {
            let count = (-1..=11).filter(|&q| phi_eval(q, n as f64) != 0.0).count();
            assert!(count == 1 || count == 2, "n = {n}: {count}");
        }
        let b = block_norms(&sin_n(&g, 512, 0.0), 2.0).unwrap();
        assert_eq!(b.nonzero_count(), 2);
        let b = block_norms(&sin_n(&g, 11, 0.0), 2.0).unwrap();
        assert_eq!(b.nonzero_count(), 1);
    }

    #[test]
    fn constant_besov_norm_closed_form() {
        let g = grid(64);
        let f = PeriodicFunction::constant(&g, 0.1);
        let v = besov_norm(&f, BesovIndex::new(3.0, 2.0, 2.0).unwrap()).unwrap();
        assert!((v - 0.125 * (2.0 * PI).sqrt() / 10.0).abs() < 1e-15);
        assert!((v - 0.031333).abs() < 5e-7);
        for (p, r) in [(1.0, 1.0), (3.0, f64::INFINITY), (f64::INFINITY, 2.0)] {
            let v = besov_norm(&f, BesovIndex::new(1.5, p, r).unwrap()).unwrap();
            let expected = (-1.5f64).exp2() * (2.0 * PI).powf(1.0 / p) * 0.1;
            assert!((v - expected).abs() < 1e-13, "p={p} r={r}");
        }
    }

    #[test]
    fn sine_and_cosine_brackets() {
        let g = grid(4096);
        let log2 = |x: f64| x.log2();
        for n in [16u32, 33, 100, 256, 511, 1000] {
            for gamma in [0.5, 2.0, 3.0] {
                for r in [1.0, 2.0, 5.0] {
                    let idx = BesovIndex::new(gamma, 2.0, r).unwrap();
                    let nf = n as f64;
                    let upper = PI.sqrt() * log2(32.0 / 9.0).powf(1.0 / r) * (4.0f64 / 3.0).powf(gamma) * nf.powf(gamma);
                    let lower = PI.sqrt() * log2(9.0 / 8.0).powf(1.0 / r) * (3.0f64 / 8.0).powf(gamma) * nf.powf(gamma);
                    let vs = besov_norm(&sin_n(&g, n, 0.0), idx).unwrap();
                    let vc = besov_norm(&cos_n(&g, n), idx).unwrap();
                    assert!(vs <= upper && vc <= upper);
                    assert!(vs >= lower && vc >= lower);
                }
            }
        }
    }

    #[test]
    fn pair_norm_trivial_cases() {
        let g = grid(64);
        let idx = BesovIndex::sobolev(3.0);
        let z = PeriodicFunction::zeros(&g);
        assert_eq!(pair_norm(&z, &z, idx).unwrap(), 0.0);
        let u = sin_n(&g, 5, 0.2);
        assert_eq!(pair_norm(&u, &z, idx).unwrap(), besov_norm(&u, idx).unwrap());
    }

    #[test]
    fn rejects_top_octave_energy() {
        let g = grid(64);
        let f = sin_n(&g, 25, 0.0);
        assert!(matches!(besov_norm(&f, BesovIndex::sobolev(1.0)), Err(Error::Resolution(_))));
        assert!(besov_norm(&sin_n(&g, 21, 0.0), BesovIndex::sobolev(1.0)).is_ok());
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(BesovIndex::new(1.0, 0.5, 2.0).is_err());
        assert!(BesovIndex::new(1.0, 2.0, 0.0).is_err());
        assert!(BesovIndex::new(f64::NAN, 2.0, 2.0).is_err());
        assert!(BesovIndex::new(1.0, f64::INFINITY, f64::INFINITY).is_ok());
    }

    #[test]
    fn sup_branch_and_infinite_p() {
        let g = grid(256);
        let f = &sin_n(&g, 44, 0.0) + &PeriodicFunction::from_terms(&[TrigTerm::cos(0.5, 3, 0.0)], &g).unwrap();
        let blocks = block_norms(&f, f64::INFINITY).unwrap();
        let sup = besov_norm(&f, BesovIndex::new(2.0, f64::INFINITY, f64::INFINITY).unwrap()).unwrap();
        let brute = blocks.iter().map(|(q, b)| (2.0 * q as f64).exp2() * b).fold(0.0, f64::max);
        assert_eq!(sup, brute);
        // mode 44 sits on the plateau of block 5 and x = 3π/32 is a node where sin(44x) = 1
        assert!((blocks.get(5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p_quadrature_agrees_with_parseval_blockwise() {
        let g = grid(256);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PeriodicFunction::random(&g, 80, &mut rng).unwrap();
        let exact = block_norms(&f, 2.0).unwrap();
        let quad = block_norms(&f, 2.0 + 1e-13).unwrap();
        for ((_, a), (_, b)) in exact.iter().zip(quad.iter()) {
            assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
        }
    }

    #[test]
    fn reconstruction_from_blocks() {
        let g = grid(512);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = PeriodicFunction::random(&g, 170, &mut rng).unwrap();
            let mut sum = PeriodicFunction::zeros(&g);
            for q in -1..=DyadicPartition::q_max(512) {
                sum = &sum + &dyadic_block(&f, q);
            }
            assert!(sum.sup_distance(&f).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn phase_invariance() {
        let g = grid(1024);
        for n in [17u32, 64, 300] {
            // |f|^p is a trig polynomial for even p, so the grid quadrature is exact.
            for idx in [BesovIndex::sobolev(3.0), BesovIndex::new(1.2, 4.0, f64::INFINITY).unwrap()] {
                let base = besov_norm(&sin_n(&g, n, 0.0), idx).unwrap();
                for a in [0.3, 1.0, 2.5] {
                    let shifted = besov_norm(&sin_n(&g, n, a), idx).unwrap();
                    assert!((shifted - base).abs() <= 1e-10 * base);
                }
            }
            // Otherwise only up to quadrature error of the sampled |f|^p.
            for p in [1.0, 3.0, f64::INFINITY] {
                let idx = BesovIndex::new(1.2, p, 2.0).unwrap();
                let base = besov_norm(&sin_n(&g, n, 0.0), idx).unwrap();
                for a in [0.3, 1.0, 2.5] {
                    let shifted = besov_norm(&sin_n(&g, n, a), idx).unwrap();
                    let h = n as f64 * std::f64::consts::TAU / 1024.0;
                    assert!((shifted - base).abs() <= h * h * base, "p = {p}, n = {n}: {shifted} vs {base}");
                }
            }
        }
    }

    #[test]
    fn sobolev_bracket_contains_random_ratios() {
        let g = grid(256);
        let s = 3.0;
        let (lo, hi) = sobolev_equivalence_bracket(s, 85);
        assert!(lo > 0.0 && hi.is_finite());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let f = PeriodicFunction::random(&g, 85, &mut rng).unwrap();
            let ratio = besov_norm(&f, BesovIndex::sobolev(s)).unwrap() / sobolev_norm(&f, s);
            assert!(ratio >= lo * (1.0 - 1e-12) && ratio <= hi * (1.0 + 1e-12));
        }
    }
}
