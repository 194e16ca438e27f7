use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::fit::RateFit;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One asserted bracket or slope, with the measured value and its bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= bound,
            value,
            bound,
            detail: format!("{value:.6e} <= {bound:.6e}"),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            passed: value >= bound,
            value,
            bound,
            detail: format!("{value:.6e} >= {bound:.6e}"),
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            passed: lo < value && value < hi,
            value,
            bound: hi,
            detail: format!("{lo:.6e} < {value:.6e} < {hi:.6e}"),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = format!("{}; {}", self.detail, detail.into());
        self
    }
}

/// A solver run that left the guaranteed-size regime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Blowup {
    pub n: u32,
    pub omega: i8,
    pub time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub fits: BTreeMap<String, RateFit>,
    pub checks: Vec<Check>,
    pub blowups: Vec<Blowup>,
    pub passed: bool,
}

impl Report {
    pub fn new(experiment: &'static str, config: &ExperimentConfig) -> Self {
        Self {
            experiment,
            version: VERSION,
            config: config.clone(),
            fits: BTreeMap::new(),
            checks: Vec::new(),
            blowups: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").map_err(|e| ExperimentError::io(path, e))
    }
}

/// Writes `rows` as CSV with a header taken from the row type.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| ExperimentError::io(path, e))
}
