use std::path::PathBuf;
use std::process::ExitCode;

use besovfw_experiments::output::{exit_code, run_and_write, Experiment};
use besovfw_experiments::{ExperimentConfig, ExperimentError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "besovfw", version, about = "Periodic Fornberg-Whitham reproduction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Separation of the two solution branches over n and t.
    Nonuniform(Common),
    /// Solver error against the approximate solutions, with slope fits.
    ErrorDecay(Common),
    /// Besov brackets for sin(nx) and cos(nx).
    AppendixBounds(Common),
    /// Property suite for the norm engine, multipliers and solvers.
    Properties(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration; defaults are used for missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_path` from the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::Nonuniform(c) => (Experiment::Nonuniform, c),
        Command::ErrorDecay(c) => (Experiment::ErrorDecay, c),
        Command::AppendixBounds(c) => (Experiment::AppendixBounds, c),
        Command::Properties(c) => (Experiment::Properties, c),
    };

    let config = match &common.config {
        Some(path) => ExperimentConfig::load(path),
        None => Ok(ExperimentConfig::default()),
    };
    let mut config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = common.out {
        config.output_path = out;
    }
    let out_dir = config.output_path.clone();

    match run_and_write(experiment, &config, &out_dir) {
        Ok((report, written)) => {
            for check in report.failures() {
                eprintln!("FAILED {}: {}", check.name, check.detail);
            }
            for b in &report.blowups {
                eprintln!("blow-up: n = {}, omega = {}, t = {}", b.n, b.omega, b.time);
            }
            println!("{} -> {}, {}", report.experiment, written.csv.display(), written.report.display());
            ExitCode::from(exit_code(&report) as u8)
        }
        Err(e @ ExperimentError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
