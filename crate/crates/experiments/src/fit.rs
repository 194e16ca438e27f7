use serde::Serialize;

use crate::error::{ExperimentError, Result};

/// Least-squares line through `(log x, log y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl RateFit {
    pub const MIN_POINTS: usize = 4;

    pub fn log_log(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(ExperimentError::Config(format!("fit needs paired data, got {} and {}", xs.len(), ys.len())));
        }
        if xs.len() < Self::MIN_POINTS {
            return Err(ExperimentError::Config(format!(
                "fit needs at least {} points, got {}",
                Self::MIN_POINTS,
                xs.len()
            )));
        }
        if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(ExperimentError::Config("log-log fit needs positive finite data".into()));
        }
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return Err(ExperimentError::Config("fit abscissae are all equal".into()));
        }
        let slope = sxy / sxx;
        let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
        Ok(Self {
            slope,
            intercept: my - slope * mx,
            r_squared,
            points: xs.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [16.0, 32.0, 64.0, 128.0, 256.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-2.25)).collect();
        let fit = RateFit::log_log(&xs, &ys).unwrap();
        assert!((fit.slope + 2.25).abs() < 1e-13);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_hand_computed_regression() {
        // ln-space points (0,0), (1,1), (2,1), (3,3)
        let e = std::f64::consts::E;
        let xs = [1.0, e, e * e, e.powi(3)];
        let ys = [1.0, e, e, e.powi(3)];
        let fit = RateFit::log_log(&xs, &ys).unwrap();
        assert!((fit.slope - 0.9).abs() < 1e-12);
        assert!((fit.intercept + 0.1).abs() < 1e-12);
        // sxy = 4.5, sxx = 5, syy = 4.75
        assert!((fit.r_squared - 4.5 * 4.5 / (5.0 * 4.75)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RateFit::log_log(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(RateFit::log_log(&[1.0, 2.0, 3.0, 4.0], &[1.0, 0.0, 3.0, 4.0]).is_err());
        assert!(RateFit::log_log(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]).is_err());
    }
}
