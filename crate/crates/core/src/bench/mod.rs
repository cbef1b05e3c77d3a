//! Sweep timing, integrated autocorrelation times and power-law fits.

mod autocorr;
mod fit;
mod timing;

use thiserror::Error;

use crate::wilson::WilsonError;

pub use autocorr::{autocorrelation, integrated_autocorrelation, AutocorrResult, MIN_SERIES_LEN, WINDOW_FACTOR};
pub use fit::{fit_scaling_exponent, fit_sweep_scaling, ScalingFit};
pub use timing::{
    harness_overhead, median_seconds, tau_study, time_sweeps, write_tau_csv, write_timing_csv, BenchMetadata,
    TauRecord, TauStudyOptions, TimingOptions, TimingRecord, MIN_TIMED_SWEEPS, TAU_CSV_HEADER, TIMING_CSV_HEADER,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("series of length {len} is shorter than the minimum {min}")]
    SeriesTooShort { len: usize, min: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("no self-consistent window below {limit} (series length {len}); the chain is undersampled")]
    WindowNotFound { limit: usize, len: usize },
    #[error("a fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("log-log fit needs positive data, got x = {x}, y = {y}")]
    NonPositive { x: f64, y: f64 },
    #[error("at least {min} timed sweeps are required, got {got}")]
    TooFewSweeps { got: usize, min: usize },
    #[error(transparent)]
    Wilson(#[from] WilsonError),
}
