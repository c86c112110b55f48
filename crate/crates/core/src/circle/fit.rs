//! Least-squares slope of `log |error|` against `log n`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// Residual standard deviation of the log-log fit.
    pub residual_sd: f64,
    pub points_used: usize,
}

impl ExponentFit {
    /// Half-width of the reported band, two standard errors.
    pub fn band(&self) -> f64 {
        2.0 * self.stderr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitOutcome {
    /// Every error was zero.
    ExactAgreement,
    Fit(ExponentFit),
}

/// Fits `log |e| = slope log n + intercept` over the points with `n > 0` and `e != 0`.
pub fn error_exponent_fit(points: &[(f64, f64)]) -> Result<FitOutcome> {
    if points.len() < 10 {
        return Err(invalid(format!("need at least 10 data points, got {}", points.len())));
    }
    if points.iter().any(|&(n, e)| !(n > 0.0) || !e.is_finite()) {
        return Err(invalid("every n must be positive and every error finite"));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e != 0.0)
        .map(|&(n, e)| (n.ln(), e.abs().ln()))
        .collect();
    if logs.is_empty() {
        return Ok(FitOutcome::ExactAgreement);
    }
    let len = logs.len() as f64;
    if logs.len() < 3 {
        return Err(invalid("fewer than three nonzero errors"));
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("all n are equal"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let var = ssr / (len - 2.0);
    Ok(FitOutcome::Fit(ExponentFit {
        slope,
        intercept,
        stderr: (var / sxx).sqrt(),
        residual_sd: var.sqrt(),
        points_used: logs.len(),
    }))
}
