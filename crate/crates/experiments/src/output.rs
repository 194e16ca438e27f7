//! Runs an experiment by name and writes its CSV and `report.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::appendix::run_appendix_bounds;
use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::error_decay::run_error_decay;
use crate::nonuniform::run_nonuniform;
use crate::properties::run_properties;
use crate::report::{write_csv, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Nonuniform,
    ErrorDecay,
    AppendixBounds,
    Properties,
}

impl Experiment {
    pub fn csv_name(self) -> &'static str {
        match self {
            Self::Nonuniform => "nonuniform.csv",
            Self::ErrorDecay => "error_decay.csv",
            Self::AppendixBounds => "appendix_bounds.csv",
            Self::Properties => "properties.csv",
        }
    }
}

#[derive(Serialize)]
struct PropertyRow<'a> {
    name: &'a str,
    passed: bool,
    value: f64,
    bound: f64,
}

pub const REPORT_NAME: &str = "report.json";

/// Paths written by [`run_and_write`].
#[derive(Clone, Debug)]
pub struct Written {
    pub csv: PathBuf,
    pub report: PathBuf,
}

pub fn run_and_write(experiment: Experiment, config: &ExperimentConfig, out_dir: &Path) -> Result<(Report, Written)> {
    config.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| ExperimentError::io(out_dir, e))?;
    let csv = out_dir.join(experiment.csv_name());
    let report = match experiment {
        Experiment::Nonuniform => {
            let out = run_nonuniform(config)?;
            write_csv(&csv, &out.rows)?;
            out.report
        }
        Experiment::ErrorDecay => {
            let out = run_error_decay(config)?;
            write_csv(&csv, &out.rows)?;
            out.report
        }
        Experiment::AppendixBounds => {
            let out = run_appendix_bounds(config)?;
            write_csv(&csv, &out.rows)?;
            out.report
        }
        Experiment::Properties => {
            let report = run_properties(config)?;
            let rows: Vec<PropertyRow> = report
                .checks
                .iter()
                .map(|c| PropertyRow {
                    name: &c.name,
                    passed: c.passed,
                    value: c.value,
                    bound: c.bound,
                })
                .collect();
            write_csv(&csv, &rows)?;
            report
        }
    };
    let report_path = out_dir.join(REPORT_NAME);
    report.write_json(&report_path)?;
    Ok((report, Written { csv, report: report_path }))
}

/// Process exit status for a finished report: 3 when a solver run blew up,
/// 1 when any check failed, 0 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if !report.blowups.is_empty() {
        3
    } else if !report.passed {
        1
    } else {
        0
    }
}
