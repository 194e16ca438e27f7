//! Experiment configuration, loaded from JSON.
//!
//! Every field is optional in the document; missing ones take the defaults
//! below. Exponents `p` and `r` accept a number or the string `"inf"`.

use std::fs;
use std::path::{Path, PathBuf};

use besovfw::{BesovIndex, GridSpec};
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub s: f64,
    #[serde(with = "exponent")]
    pub p: f64,
    #[serde(with = "exponent")]
    pub r: f64,
    pub gamma: f64,
    pub delta: f64,
    pub n_list: Vec<u32>,
    pub times: Vec<f64>,
    #[serde(rename = "N")]
    pub grid_n: usize,
    pub dt: f64,
    pub seed: u64,
    pub output_path: PathBuf,
    /// Largest `n` that gets full solver runs.
    pub solver_n_max: u32,
    /// Smallest `n` entering the error-decay slope fits.
    pub error_decay_n_min: u32,
    pub blowup_factor: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            s: 3.0,
            p: 2.0,
            r: 2.0,
            gamma: 1.75,
            delta: 3.5,
            n_list: vec![16, 32, 64, 128, 256, 512],
            times: vec![0.0, 0.25, 0.5, 1.0],
            grid_n: 4096,
            dt: 1e-3,
            seed: 20_240_601,
            output_path: PathBuf::from("out"),
            solver_n_max: 256,
            error_decay_n_min: 32,
            blowup_factor: 4.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(ExperimentError::Config(msg));
        let (s, gamma, delta) = (self.s, self.gamma, self.delta);
        if !(self.p >= 1.0 && self.r >= 1.0) {
            return fail(format!("p and r must be at least 1, got p = {}, r = {}", self.p, self.r));
        }
        let s_min = f64::max(2.0 + 1.0 / self.p, 2.5);
        if !(s.is_finite() && s > s_min) {
            return fail(format!("s = {s} must exceed {s_min}"));
        }
        if !(gamma > s - 1.5 && gamma < s - 1.0) {
            return fail(format!("gamma = {gamma} must lie in ({}, {})", s - 1.5, s - 1.0));
        }
        if !(delta > s && delta < s + 1.0) {
            return fail(format!("delta = {delta} must lie in ({s}, {})", s + 1.0));
        }
        if self.n_list.is_empty() || self.n_list.iter().any(|&n| n < 2) {
            return fail("n_list must be non-empty with every n >= 2".into());
        }
        if !self.n_list.windows(2).all(|w| w[0] < w[1]) {
            return fail("n_list must be strictly increasing".into());
        }
        if let Err(e) = GridSpec::new(self.grid_n) {
            return fail(e.to_string());
        }
        let n_max = *self.n_list.last().unwrap() as f64;
        if 2.0 * n_max >= self.grid_n as f64 / 3.0 {
            return fail(format!("2 * max(n_list) = {} must stay below N/3 = {:.1}", 2.0 * n_max, self.grid_n as f64 / 3.0));
        }
        if self.times.is_empty() || self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return fail("times must be non-empty, finite and non-negative".into());
        }
        if !self.times.windows(2).all(|w| w[0] < w[1]) {
            return fail("times must be strictly increasing".into());
        }
        if self.t_end() <= 0.0 {
            return fail("times must contain a positive entry".into());
        }
        if !(self.dt > 0.0 && self.dt <= self.t_end()) {
            return fail(format!("dt = {} must lie in (0, max(times)]", self.dt));
        }
        if !(self.blowup_factor > 1.0) {
            return fail(format!("blowup_factor = {} must exceed 1", self.blowup_factor));
        }
        if self.solver_ns().is_empty() {
            return fail(format!("no n in n_list is at most solver_n_max = {}", self.solver_n_max));
        }
        Ok(())
    }

    pub fn index(&self) -> BesovIndex {
        BesovIndex {
            s: self.s,
            p: self.p,
            r: self.r,
        }
    }

    pub fn gamma_index(&self) -> BesovIndex {
        self.index().with_s(self.gamma)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.grid_n)?)
    }

    /// Interpolation weight `(δ - s) / (δ - γ)`.
    pub fn theta(&self) -> f64 {
        (self.delta - self.s) / (self.delta - self.gamma)
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Wavenumbers that get solver runs.
    pub fn solver_ns(&self) -> Vec<u32> {
        self.n_list.iter().copied().filter(|&n| n <= self.solver_n_max).collect()
    }

    /// Time at which the slope assertions are made: 0.5 when sampled,
    /// otherwise the last sample time.
    pub fn check_time(&self) -> f64 {
        if self.times.contains(&0.5) {
            0.5
        } else {
            self.t_end()
        }
    }
}

/// `f64` exponents with `"inf"` for infinity.
mod exponent {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        struct Exp;
        impl Visitor<'_> for Exp {
            type Value = f64;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        de.deserialize_any(Exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.theta() - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(cfg.solver_ns(), vec![16, 32, 64, 128, 256]);
        assert_eq!(cfg.check_time(), 0.5);
    }

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(ExperimentConfig::from_json("{}").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn infinite_exponents_round_trip() {
        let cfg = ExperimentConfig::from_json(r#"{"r": "inf", "p": 2}"#).unwrap();
        assert!(cfg.r.is_infinite());
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""r":"inf""#));
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn grid_key_is_capital_n() {
        let cfg = ExperimentConfig::from_json(r#"{"N": 2048, "n_list": [16, 32]}"#).unwrap();
        assert_eq!(cfg.grid_n, 2048);
        assert!(ExperimentConfig::from_json(r#"{"grid_n": 2048}"#).is_err());
    }

    #[test]
    fn window_violations_are_rejected() {
        for doc in [
            r#"{"gamma": 2.0}"#,
            r#"{"gamma": 1.5}"#,
            r#"{"delta": 3.0}"#,
            r#"{"delta": 4.0}"#,
            r#"{"s": 2.5}"#,
            r#"{"s": 2.6, "p": 1, "gamma": 1.3, "delta": 3.0}"#,
            r#"{"p": 0.5}"#,
            r#"{"N": 1024}"#,
            r#"{"times": [0.5, 0.25]}"#,
            r#"{"times": [0.0]}"#,
            r#"{"n_list": []}"#,
            r#"{"dt": 0.0}"#,
            r#"{"blowup_factor": 1.0}"#,
            r#"{"solver_n_max": 8}"#,
        ] {
            let err = ExperimentConfig::from_json(doc).unwrap_err();
            assert!(matches!(err, ExperimentError::Config(_)), "{doc}");
        }
    }
}
