//! Two-sided brackets for `‖sin nx‖` and `‖cos nx‖` in `B^γ_{p,r}`,
//! normalized by `‖cos‖_{Lᵖ} n^γ`.

use besovfw::approx_sequences::bound_constants;
use besovfw::besov::block_norms;
use besovfw::{GridSpec, PeriodicFunction, TrigTerm};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Check, Report};

const PHASE: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixRow {
    pub n: u32,
    pub gamma: f64,
    #[serde(rename = "fn")]
    pub function: &'static str,
    pub normalized_value: f64,
    pub lower: f64,
    pub upper: f64,
    pub block_count: usize,
}

#[derive(Clone, Debug)]
pub struct AppendixOutput {
    pub rows: Vec<AppendixRow>,
    pub report: Report,
}

/// `‖cos‖_{Lᵖ(0, 2π)}` by quadrature on a fine grid; exact for `p = 2`
/// and `p = ∞`.
pub fn cos_lp_norm(p: f64) -> Result<f64> {
    let grid = GridSpec::new(1 << 16)?;
    let f = PeriodicFunction::from_terms(&[TrigTerm::cos(1.0, 1, 0.0)], &grid)?;
    Ok(f.lp_norm(p)?)
}

/// Whether the grid rule integrates `|sin nx|ᵖ` exactly: `p` even and the
/// trig polynomial `|sin nx|ᵖ` of degree `pn` unaliased on `N` points.
fn quadrature_is_exact(p: f64, n: u32, grid_n: usize) -> bool {
    p.fract() == 0.0 && p as u64 % 2 == 0 && p * (n as f64) < grid_n as f64
}

pub fn run_appendix_bounds(config: &ExperimentConfig) -> Result<AppendixOutput> {
    config.validate()?;
    let grid = config.grid()?;
    let lp = cos_lp_norm(config.p)?;
    let mut report = Report::new("appendix_bounds", config);
    let mut rows = Vec::new();

    for &n in &config.n_list {
        let funcs = [
            ("sin", TrigTerm::sin(1.0, n, 0.0)),
            ("cos", TrigTerm::cos(1.0, n, 0.0)),
            ("sin_phase", TrigTerm::sin(1.0, n, PHASE)),
        ];
        for gamma in [config.s, config.s - 1.0] {
            let (upper, lower) = bound_constants(gamma, gamma, config.r);
            let scale = lp * (n as f64).powf(gamma);
            for (name, term) in funcs {
                let f = PeriodicFunction::from_terms(&[term], &grid)?;
                let blocks = block_norms(&f, config.p)?;
                rows.push(AppendixRow {
                    n,
                    gamma,
                    function: name,
                    normalized_value: blocks.besov(gamma, config.r) / scale,
                    lower,
                    upper,
                    block_count: blocks.nonzero_count(),
                });
            }
        }
    }

    for row in &rows {
        let tag = format!("n{}_gamma{}_{}", row.n, row.gamma, row.function);
        report.push(Check::within(format!("bracket_{tag}"), row.normalized_value, row.lower, row.upper));
        report.push(Check::within(format!("block_count_{tag}"), row.block_count as f64, 0.5, 2.5));
    }
    for pair in rows.chunks(3) {
        let (plain, shifted) = (&pair[0], &pair[2]);
        // Sampled Lᵖ norms are only shift invariant when the grid integrates |f|ᵖ exactly.
        if !quadrature_is_exact(config.p, plain.n, config.grid_n) {
            continue;
        }
        let drift = (shifted.normalized_value / plain.normalized_value - 1.0).abs();
        report.push(Check::at_most(format!("phase_invariance_n{}_gamma{}", plain.n, plain.gamma), drift, 1e-10));
    }
    Ok(AppendixOutput { rows, report })
}
