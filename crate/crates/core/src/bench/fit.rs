use serde::{Deserialize, Serialize};

use super::timing::TimingRecord;
use super::BenchError;

/// `log y = intercept + exponent · log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub std_error: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Ordinary least squares in log-log coordinates.
pub fn fit_scaling_exponent(x: &[f64], y: &[f64]) -> Result<ScalingFit, BenchError> {
    assert_eq!(x.len(), y.len(), "x and y lengths differ");
    let n = x.len();
    if n < 3 {
        return Err(BenchError::TooFewPoints(n));
    }
    if let Some((&xi, &yi)) = x.iter().zip(y).find(|(&a, &b)| !(a > 0.0 && b > 0.0)) {
        return Err(BenchError::NonPositive { x: xi, y: yi });
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n as f64;
    let my = ly.iter().sum::<f64>() / n as f64;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let std_error = (rss / (n - 2) as f64 / sxx).sqrt();
    Ok(ScalingFit {
        exponent: slope,
        std_error,
        intercept,
        points: n,
    })
}

/// Exponent of seconds per sweep against lattice volume.
pub fn fit_sweep_scaling(records: &[TimingRecord]) -> Result<ScalingFit, BenchError> {
    let x: Vec<f64> = records.iter().map(|r| r.volume as f64).collect();
    let y: Vec<f64> = records.iter().map(|r| r.seconds_per_sweep).collect();
    fit_scaling_exponent(&x, &y)
}
