//! Distance between solver solutions and the approximate solutions they
//! start from, measured at the low index `γ` and the working index `s`.

use besovfw::approx_sequences::approximate_state;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::fit::RateFit;
use crate::report::{Check, Report};
use crate::sweep::{Sweep, OMEGAS};

/// Errors are the larger of the two branches `ω = ±1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorDecayRow {
    pub n: u32,
    pub t: f64,
    pub err_gamma: f64,
    pub err_s: f64,
}

#[derive(Clone, Debug)]
pub struct ErrorDecayOutput {
    pub rows: Vec<ErrorDecayRow>,
    pub report: Report,
}

pub fn run_error_decay(config: &ExperimentConfig) -> Result<ErrorDecayOutput> {
    let sweep = Sweep::run(config)?;
    run_error_decay_with(config, &sweep)
}

pub fn run_error_decay_with(config: &ExperimentConfig, sweep: &Sweep) -> Result<ErrorDecayOutput> {
    config.validate()?;
    let grid = config.grid()?;
    let (idx_s, idx_g) = (config.index(), config.gamma_index());
    let mut report = Report::new("error_decay", config);
    report.blowups = sweep.blowups();

    let mut rows = Vec::new();
    for n in config.solver_ns() {
        for &t in &config.times {
            let mut row = ErrorDecayRow {
                n,
                t,
                err_gamma: 0.0,
                err_s: 0.0,
            };
            let mut complete = true;
            for omega in OMEGAS {
                let run = sweep.get(n, omega).expect("sweep covers every solver n");
                let Some(state) = run.trajectory.at(t) else {
                    complete = false;
                    break;
                };
                let e = state.difference(&approximate_state(&run.params, t, &grid)?)?;
                row.err_gamma = row.err_gamma.max(e.pair_norm(idx_g)?);
                row.err_s = row.err_s.max(e.pair_norm(idx_s)?);
            }
            if complete {
                rows.push(row);
            }
        }
    }

    for row in rows.iter().filter(|r| r.t == 0.0) {
        report.push(Check::at_most(format!("initial_error_n{}", row.n), row.err_gamma.max(row.err_s), 1e-12));
    }

    let fit_ns: Vec<u32> = config.solver_ns().into_iter().filter(|&n| n >= config.error_decay_n_min).collect();
    let check_t = config.check_time();
    let slope_gamma_bound = -(config.s + 1.0 - config.gamma) + 0.1;
    let slope_s_bound = -config.theta() + 0.05;
    for &t in config.times.iter().filter(|&&t| t > 0.0) {
        let at_t: Vec<&ErrorDecayRow> = rows.iter().filter(|r| r.t == t && fit_ns.contains(&r.n)).collect();
        let checked = t == check_t;
        if at_t.len() < fit_ns.len() || at_t.len() < RateFit::MIN_POINTS {
            if checked {
                report.push(Check::at_most("err_gamma_slope", f64::NAN, slope_gamma_bound).with_detail("incomplete runs"));
                report.push(Check::at_most("err_s_slope", f64::NAN, slope_s_bound).with_detail("incomplete runs"));
            }
            continue;
        }
        let ns: Vec<f64> = at_t.iter().map(|r| r.n as f64).collect();
        let eg: Vec<f64> = at_t.iter().map(|r| r.err_gamma).collect();
        let es: Vec<f64> = at_t.iter().map(|r| r.err_s).collect();
        let fit_g = RateFit::log_log(&ns, &eg)?;
        let fit_s = RateFit::log_log(&ns, &es)?;
        report.fits.insert(format!("err_gamma_t{t}"), fit_g);
        report.fits.insert(format!("err_s_t{t}"), fit_s);
        if checked {
            report.push(Check::at_most("err_gamma_slope", fit_g.slope, slope_gamma_bound).with_detail(format!("t = {t}")));
            report.push(
                Check::at_most("err_s_slope", fit_s.slope, slope_s_bound).with_detail(format!("t = {t}, theta = {:.6}", config.theta())),
            );
        }
    }
    Ok(ErrorDecayOutput { rows, report })
}
