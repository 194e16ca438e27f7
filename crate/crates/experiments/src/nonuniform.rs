//! Separation of the `ω = ±1` solutions: initial data converge, solutions
//! at positive times do not.

use std::f64::consts::PI;

use besovfw::approx_sequences::{bound_constants, initial_state, predicted_distance};
use besovfw::SequenceParams;
use serde::Serialize;

use crate::appendix::cos_lp_norm;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::fit::RateFit;
use crate::report::{Check, Report};
use crate::sweep::Sweep;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonuniformRow {
    pub n: u32,
    pub t: f64,
    pub initial_dist: f64,
    pub solver_dist: f64,
    pub predicted_dist: f64,
    /// `solver_dist / |sin t|`; NaN at `t = 0`.
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct NonuniformOutput {
    pub rows: Vec<NonuniformRow>,
    pub report: Report,
}

impl NonuniformOutput {
    pub fn row(&self, n: u32, t: f64) -> Option<&NonuniformRow> {
        find_row(&self.rows, n, t)
    }
}

pub fn run_nonuniform(config: &ExperimentConfig) -> Result<NonuniformOutput> {
    let sweep = Sweep::run(config)?;
    run_nonuniform_with(config, &sweep)
}

pub fn run_nonuniform_with(config: &ExperimentConfig, sweep: &Sweep) -> Result<NonuniformOutput> {
    config.validate()?;
    let grid = config.grid()?;
    let idx = config.index();
    let mut report = Report::new("nonuniform", config);
    report.blowups = sweep.blowups();

    let mut rows = Vec::new();
    let mut initial = Vec::with_capacity(config.n_list.len());
    for &n in &config.n_list {
        let plus = initial_state(&SequenceParams::new(1, n, config.s)?, &grid)?;
        let minus = initial_state(&SequenceParams::new(-1, n, config.s)?, &grid)?;
        let initial_dist = plus.difference(&minus)?.pair_norm(idx)?;
        initial.push(initial_dist);

        let (Some(a), Some(b)) = (sweep.get(n, 1), sweep.get(n, -1)) else {
            rows.push(NonuniformRow {
                n,
                t: 0.0,
                initial_dist,
                solver_dist: initial_dist,
                predicted_dist: 0.0,
                ratio: f64::NAN,
            });
            continue;
        };
        for &t in &config.times {
            let (Some(ua), Some(ub)) = (a.trajectory.at(t), b.trajectory.at(t)) else {
                continue;
            };
            let solver_dist = ua.difference(ub)?.pair_norm(idx)?;
            rows.push(NonuniformRow {
                n,
                t,
                initial_dist,
                solver_dist,
                predicted_dist: predicted_distance(n, config.s, idx, t, &grid)?,
                ratio: if t == 0.0 { f64::NAN } else { solver_dist / t.sin().abs() },
            });
        }
    }

    let ns: Vec<f64> = config.n_list.iter().map(|&n| n as f64).collect();
    let fit = RateFit::log_log(&ns, &initial)?;
    report.fits.insert("initial_dist".into(), fit);
    report.push(Check::at_most("initial_dist_slope", (fit.slope + 1.0).abs(), 0.02).with_detail(format!("slope {:.6}", fit.slope)));
    report.push(Check::at_least("initial_dist_r_squared", fit.r_squared, 0.999));

    separation_checks(config, sweep, &rows, &mut report)?;
    Ok(NonuniformOutput { rows, report })
}

fn find_row(rows: &[NonuniformRow], n: u32, t: f64) -> Option<&NonuniformRow> {
    rows.iter().find(|r| r.n == n && r.t == t)
}

fn separation_checks(config: &ExperimentConfig, sweep: &Sweep, rows: &[NonuniformRow], report: &mut Report) -> Result<()> {
    let solved: Vec<u32> = config.solver_ns().into_iter().filter(|&n| sweep.get(n, 1).is_some()).collect();
    for &n in &solved {
        if let Some(row) = find_row(rows, n, 0.0) {
            report.push(Check::at_most(format!("t0_matches_initial_n{n}"), (row.solver_dist - row.initial_dist).abs(), 0.0));
        }
    }
    let Some(&n_hi) = solved.last() else {
        return Ok(());
    };
    let n_lo = n_hi / 4;
    let positive: Vec<f64> = config.times.iter().copied().filter(|&t| t > 0.0).collect();

    let (upper_s, lower_s) = bound_constants(config.s, config.s, config.r);
    let (_, lower_s1) = bound_constants(config.s - 1.0, config.s - 1.0, config.r);
    let lp = if config.p == 2.0 { PI.sqrt() } else { cos_lp_norm(config.p)? };
    let floor = 0.5 * 2.0 * lp * lower_s * (1.0 + lower_s1 / (upper_s * n_hi as f64));

    let mut ratios = Vec::new();
    for &t in &positive {
        let Some(row) = find_row(rows, n_hi, t) else {
            report.push(Check::at_most(format!("separation_n{n_hi}_t{t}"), f64::NAN, 0.3).with_detail("run aborted before t"));
            continue;
        };
        let rel = (row.solver_dist / row.predicted_dist - 1.0).abs();
        report.push(Check::at_most(format!("prediction_n{n_hi}_t{t}"), rel, 0.3));
        report.push(Check::at_least(format!("floor_n{n_hi}_t{t}"), row.ratio, floor));
        ratios.push(row.ratio);
        match find_row(rows, n_lo, t) {
            Some(lo) => report.push(Check::at_least(
                format!("no_decay_n{n_hi}_vs_n{n_lo}_t{t}"),
                row.solver_dist / lo.solver_dist,
                0.9,
            )),
            None if solved.contains(&n_lo) => {
                report.push(Check::at_least(format!("no_decay_n{n_hi}_vs_n{n_lo}_t{t}"), f64::NAN, 0.9).with_detail("run aborted before t"))
            }
            None => {}
        }
    }
    if ratios.len() >= 2 {
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        report.push(Check::at_most(format!("sin_profile_spread_n{n_hi}"), max / min - 1.0, 0.25));
    }
    Ok(())
}
