//! Property suite over seeded random families: Littlewood-Paley identities,
//! Besov inequalities, multiplier probes and solver diagnostics.

use besovfw::besov::{besov_norm, dyadic_block, sobolev_equivalence_bracket, sobolev_norm, DyadicPartition};
use besovfw::fw_system::{solve, solve_linear_transport};
use besovfw::operators::{apply_multiplier, operator_ratio, RatioProbe};
use besovfw::{approx_sequences, BesovIndex, GridSpec, Multiplier, PeriodicFunction, SequenceParams, SolverConfig, State, TrigTerm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::{Check, Report};
use crate::sweep::Sweep;
use crate::transport::{fit_transport_constants, TransportFamily};

const TRIALS: usize = 100;
const SLACK: f64 = 1e-10;
const ALGEBRA_PAIRS: usize = 200;

/// Independent generator for one named property.
fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_family(grid: &GridSpec, max_mode: usize, count: usize, mut rng: ChaCha8Rng) -> Result<Vec<PeriodicFunction>> {
    (0..count).map(|_| Ok(PeriodicFunction::random(grid, max_mode, &mut rng)?)).collect()
}

pub fn run_properties(config: &ExperimentConfig) -> Result<Report> {
    let sweep = Sweep::run(config)?;
    run_properties_with(config, &sweep)
}

pub fn run_properties_with(config: &ExperimentConfig, sweep: &Sweep) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("properties", config);
    report.blowups = sweep.blowups();
    let idx = config.index();
    let seed = config.seed;

    partition_checks(&mut report, seed)?;
    inequality_checks(&mut report, config, seed)?;
    algebra_check(&mut report, idx, seed)?;
    if config.p == 2.0 && config.r == 2.0 {
        sobolev_check(&mut report, config.s, seed)?;
    }
    multiplier_checks(&mut report, idx, seed)?;
    sweep_checks(&mut report, config, sweep)?;
    solver_checks(&mut report, config)?;
    transport_checks(&mut report, idx, seed)?;
    Ok(report)
}

fn partition_checks(report: &mut Report, seed: u64) -> Result<()> {
    let q_max = DyadicPartition::q_max(4096);
    let defect = (0..=2048u32)
        .map(|j| ((-1..=q_max).map(|q| DyadicPartition::phi(q, j as f64)).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    report.push(Check::at_most("partition_of_unity", defect, 1e-14));

    let grid = GridSpec::new(512)?;
    let mut worst: f64 = 0.0;
    for f in random_family(&grid, 170, 20, rng(seed, 1))? {
        let mut sum = PeriodicFunction::zeros(&grid);
        for q in -1..=DyadicPartition::q_max(512) {
            sum = &sum + &dyadic_block(&f, q);
        }
        worst = worst.max(sum.sup_distance(&f)?);
    }
    report.push(Check::at_most("reconstruction", worst, 1e-12));
    Ok(())
}

fn inequality_checks(report: &mut Report, config: &ExperimentConfig, seed: u64) -> Result<()> {
    let grid = GridSpec::new(256)?;
    let idx = config.index();
    let family = random_family(&grid, 85, TRIALS, rng(seed, 2))?;

    let (s1, s2) = (config.delta, config.gamma);
    let mut violations = 0;
    for f in &family {
        let (a, b) = (besov_norm(f, idx.with_s(s1))?, besov_norm(f, idx.with_s(s2))?);
        let bad = [0.25, 0.5, 0.75].iter().any(|&th| {
            let mid = besov_norm(f, idx.with_s(th * s1 + (1.0 - th) * s2)).unwrap_or(f64::INFINITY);
            mid > a.powf(th) * b.powf(1.0 - th) * (1.0 + SLACK)
        });
        violations += bad as usize;
    }
    report.push(Check::at_most("interpolation_violations", violations as f64, 0.0).with_detail(format!("{TRIALS} trials")));

    let mut violations = 0;
    for f in &family {
        for (hi, lo) in [(config.s, config.gamma), (config.delta, config.s)] {
            let big = besov_norm(f, idx.with_s(lo))?;
            let small = besov_norm(f, idx.with_s(hi))?;
            violations += (big > 2f64.powf(hi - lo) * small * (1.0 + SLACK)) as usize;
        }
    }
    report.push(Check::at_most("embedding_violations", violations as f64, 0.0).with_detail(format!("{TRIALS} trials")));

    // Exact for p = 2; other p carry the sampling error of the grid rule.
    let idx2 = BesovIndex { p: 2.0, ..idx };
    let g = GridSpec::new(1024)?;
    let mut drift: f64 = 0.0;
    for n in [17u32, 64, 300] {
        let base = besov_norm(&PeriodicFunction::from_terms(&[TrigTerm::sin(1.0, n, 0.0)], &g)?, idx2)?;
        for a in [0.3, 1.0, 2.5] {
            let shifted = besov_norm(&PeriodicFunction::from_terms(&[TrigTerm::sin(1.0, n, a)], &g)?, idx2)?;
            drift = drift.max((shifted / base - 1.0).abs());
        }
    }
    report.push(Check::at_most("phase_invariance", drift, 1e-10));
    Ok(())
}

/// Largest `‖fg‖ / (‖f‖ ‖g‖)` over pairs from one family. Coefficients
/// decay like `(1 + j)^{-(s+1)}`, so every block contributes to the norms;
/// modes stay below `N/6` so products are resolved exactly.
fn algebra_constant(grid: &GridSpec, idx: BesovIndex, mut rng: ChaCha8Rng) -> Result<f64> {
    let weight = |j: usize| (1.0 + j as f64).powf(-(idx.s + 1.0));
    let mut k: f64 = 0.0;
    for _ in 0..ALGEBRA_PAIRS {
        let f = PeriodicFunction::random_weighted(grid, grid.len() / 6, &mut rng, weight)?;
        let g = PeriodicFunction::random_weighted(grid, grid.len() / 6, &mut rng, weight)?;
        k = k.max(besov_norm(&f.multiply(&g)?, idx)? / (besov_norm(&f, idx)? * besov_norm(&g, idx)?));
    }
    Ok(k)
}

fn algebra_check(report: &mut Report, idx: BesovIndex, seed: u64) -> Result<()> {
    let grid = GridSpec::new(256)?;
    let a = algebra_constant(&grid, idx, rng(seed, 3))?;
    let b = algebra_constant(&grid, idx, rng(seed, 4))?;
    report.push(Check::at_most("algebra_constant_stability", (a / b - 1.0).abs(), 0.1).with_detail(format!("K = {a:.6}, {b:.6}")));
    Ok(())
}

fn sobolev_check(report: &mut Report, s: f64, seed: u64) -> Result<()> {
    let grid = GridSpec::new(256)?;
    let (lo, hi) = sobolev_equivalence_bracket(s, 85);
    let idx = BesovIndex::sobolev(s);
    let mut outside = 0;
    for f in random_family(&grid, 85, TRIALS, rng(seed, 5))? {
        let ratio = besov_norm(&f, idx)? / sobolev_norm(&f, s);
        outside += !(lo * (1.0 - SLACK) <= ratio && ratio <= hi * (1.0 + SLACK)) as usize;
    }
    report.push(Check::at_most("sobolev_bracket_violations", outside as f64, 0.0).with_detail(format!("bracket [{lo:.6}, {hi:.6}]")));
    Ok(())
}

fn multiplier_checks(report: &mut Report, idx: BesovIndex, seed: u64) -> Result<()> {
    let grid = GridSpec::new(256)?;
    let f = PeriodicFunction::random(&grid, 80, &mut rng(seed, 6))?;
    let mut worst: f64 = 0.0;
    for m in [Multiplier::derivative(), Multiplier::inverse_helmholtz_dx()] {
        for q in -1..=DyadicPartition::q_max(256) {
            let a = dyadic_block(&apply_multiplier(&f, &m), q);
            let b = apply_multiplier(&dyadic_block(&f, q), &m);
            worst = worst.max(a.sup_distance(&b)?);
        }
    }
    report.push(Check::at_most("block_commutation", worst, 1e-12));

    let grid = GridSpec::new(512)?;
    let m = Multiplier::inverse_helmholtz_dx();
    let from = idx.shifted(-1.0);
    let k1 = operator_ratio(&m, from, idx, &RatioProbe::new(&grid, 200, seed))?;
    let k2 = operator_ratio(&m, from, idx, &RatioProbe::new(&grid, 200, seed.wrapping_add(1)))?;
    report.push(Check::at_most("smoothing_ratio_stability", (k1 / k2 - 1.0).abs(), 0.1).with_detail(format!("kappa = {k1:.6}, {k2:.6}")));
    report.push(Check::at_most("smoothing_ratio_bound", k1.max(k2), 10.0));

    let d = Multiplier::derivative();
    let ratios = [64usize, 256, 1024]
        .iter()
        .map(|&n| operator_ratio(&d, idx, idx, &RatioProbe::new(&GridSpec::new(n)?, 20, seed)))
        .collect::<besovfw::Result<Vec<f64>>>()?;
    let growth = ratios.windows(2).map(|w| w[1] / w[0]).fold(f64::INFINITY, f64::min);
    report.push(Check::at_least("derivative_ratio_growth", growth, 2.0).with_detail(format!("{ratios:.3?}")));
    Ok(())
}

/// Diagnostics over the experiment solves.
fn sweep_checks(report: &mut Report, config: &ExperimentConfig, sweep: &Sweep) -> Result<()> {
    let idx = config.index();
    let mut drift: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    for run in &sweep.runs {
        let (_, s0) = &run.trajectory.samples[0];
        let size0 = s0.pair_norm(idx)?;
        for (_, s) in &run.trajectory.samples {
            drift = drift.max((s.u.mean() - s0.u.mean()).abs()).max((s.rho.mean() - s0.rho.mean()).abs());
            if run.trajectory.completed() {
                excess = excess.max(s.pair_norm(idx)? - (2.0 * size0 + 1e-6));
            }
        }
    }
    report.push(Check::at_most("mean_conservation", drift, 1e-10));
    report.push(Check::at_most("solution_size_bound", excess, 0.0).with_detail("max of size(t) - (2 size(0) + 1e-6)"));
    Ok(())
}

fn max_diff(a: &State, b: &State) -> Result<f64> {
    Ok(a.u.sup_distance(&b.u)?.max(a.rho.sup_distance(&b.rho)?))
}

fn solver_checks(report: &mut Report, config: &ExperimentConfig) -> Result<()> {
    // Temporal order by self-convergence against a fine reference.
    let grid = GridSpec::new(64)?;
    let s0 = State::new(
        PeriodicFunction::from_terms(&[TrigTerm::sin(0.1, 1, 0.0), TrigTerm::cos(0.05, 2, 0.3)], &grid)?,
        PeriodicFunction::from_terms(&[TrigTerm::constant(1.0), TrigTerm::cos(0.3, 1, 0.0)], &grid)?,
    )?;
    let at_one = |dt: f64| -> Result<State> {
        let cfg = SolverConfig::new(&grid, dt, 1.0, vec![1.0])?;
        Ok(solve(&s0, &cfg)?.at(1.0).cloned().expect("small data completes"))
    };
    let reference = at_one(0.2 / 64.0)?;
    let errs = [0.2, 0.1, 0.05].iter().map(|&dt| max_diff(&at_one(dt)?, &reference)).collect::<Result<Vec<f64>>>()?;
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let worst = orders.iter().map(|o| (o - 4.0).abs()).fold(0.0, f64::max);
    report.push(Check::at_most("rk4_order", worst, 0.2).with_detail(format!("orders {orders:.4?}")));

    // Spatial and temporal resolution of the experiment family.
    let mut change: f64 = 0.0;
    for n in [16u32, 64] {
        let params = SequenceParams::new(1, n, config.s)?;
        let size = |grid_n: usize, dt: f64| -> Result<f64> {
            let g = GridSpec::new(grid_n)?;
            let cfg = SolverConfig::new(&g, dt, 1.0, vec![1.0])?;
            let traj = solve(&approx_sequences::initial_state(&params, &g)?, &cfg)?;
            Ok(traj.at(1.0).map(|s| s.pair_norm(config.index())).transpose()?.unwrap_or(f64::NAN))
        };
        let coarse = size(512, 2e-3)?;
        let fine = size(1024, 1e-3)?;
        change = change.max((fine / coarse - 1.0).abs());
    }
    report.push(Check::at_most("resolution_self_convergence", change, 1e-6));

    // Transport forward with v, then backward with -v.
    let grid = GridSpec::new(128)?;
    let zero = PeriodicFunction::zeros(&grid);
    let v = PeriodicFunction::from_terms(&[TrigTerm::sin(1.0, 1, 0.0)], &grid)?;
    let back_v = v.scaled(-1.0);
    let cfg = SolverConfig::new(&grid, 1e-3, 0.5, vec![0.5])?;
    let fwd = solve_linear_transport(|_| v.clone(), |_| zero.clone(), &v, &cfg)?;
    let mid = fwd.at(0.5).cloned().unwrap_or_else(|| zero.clone());
    let back = solve_linear_transport(|_| back_v.clone(), |_| zero.clone(), &mid, &cfg)?;
    let err = back.at(0.5).map(|f| f.sup_distance(&v)).transpose()?.unwrap_or(f64::NAN);
    report.push(Check::at_most("transport_time_reversal", err, 1e-6));
    Ok(())
}

fn transport_checks(report: &mut Report, idx: BesovIndex, seed: u64) -> Result<()> {
    let fit = fit_transport_constants(&TransportFamily::new(idx, seed))?;
    report.push(Check::at_most("transport_constant_stability", fit.max_deviation, 0.2).with_detail(format!("C = {:.4?}", fit.constants)));
    Ok(())
}
