use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::BenchError;

pub const MIN_SERIES_LEN: usize = 100;

/// The window `W` is the smallest with `W ≥ WINDOW_FACTOR · τ_int(W)`.
pub const WINDOW_FACTOR: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutocorrResult {
    /// `½ + Σ_{k=1}^{W} ρ(k)`, in units of the series spacing.
    pub tau_int: f64,
    pub window: usize,
    pub series_len: usize,
}

/// Normalized autocorrelation `ρ(k)` for `k = 0..len`, via a zero-padded FFT.
pub fn autocorrelation(series: &[f64]) -> Result<Vec<f64>, BenchError> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .map(|&x| Complex::new(x - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let c0 = buf[0].re;
    if !(c0 > 1e-300 * n as f64) {
        return Err(BenchError::ZeroVariance);
    }
    // Σ_i δ_i δ_{i+k} / Σ_i δ_i²; the 1/m FFT scale cancels.
    Ok(buf[..n].iter().map(|z| z.re / c0).collect())
}

pub fn integrated_autocorrelation(series: &[f64]) -> Result<AutocorrResult, BenchError> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return Err(BenchError::SeriesTooShort {
            len: n,
            min: MIN_SERIES_LEN,
        });
    }
    let rho = autocorrelation(series)?;
    let limit = n / 4;
    let mut tau = 0.5;
    for w in 1..=limit {
        tau += rho[w];
        if w as f64 >= WINDOW_FACTOR * tau {
            return Ok(AutocorrResult {
                tau_int: tau,
                window: w,
                series_len: n,
            });
        }
    }
    Err(BenchError::WindowNotFound { limit, len: n })
}
