use std::hint::black_box;
use std::io::{self, Write};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::group::GroupLabel;
use crate::lattice::LatticeGeometry;
use crate::scalar::Real;
use crate::wilson::{Algorithm, Chain, McParams, Start, WilsonError};

use super::autocorr::{integrated_autocorrelation, AutocorrResult};
use super::BenchError;

pub const MIN_TIMED_SWEEPS: usize = 10;
pub const TIMING_CSV_HEADER: &str = "ns,volume,links,seconds_per_sweep";
pub const TAU_CSV_HEADER: &str = "ns,tau_int,window,series_len";

/// Where and how a benchmark ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchMetadata {
    pub os: String,
    pub arch: String,
    pub available_parallelism: usize,
    pub scalar_bits: usize,
    pub notes: Vec<String>,
}

impl BenchMetadata {
    pub fn collect<T: Real>(notes: Vec<String>) -> Self {
        Self {
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            available_parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            scalar_bits: 8 * std::mem::size_of::<T>(),
            notes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub extents: Vec<usize>,
    /// Extent of the first spatial direction.
    pub ns: usize,
    pub volume: usize,
    pub links: usize,
    pub group: GroupLabel,
    pub beta: f64,
    pub algorithm: Algorithm,
    /// Median wall-clock seconds of one sweep.
    pub seconds_per_sweep: f64,
    pub sweeps_timed: usize,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingOptions {
    pub algorithm: Algorithm,
    pub warmup: usize,
    pub workers: usize,
    pub seed: u64,
}

impl Default for TimingOptions {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Heatbath,
            warmup: 3,
            workers: 1,
            seed: 1,
        }
    }
}

/// Runs `warmup` untimed calls, then returns the median wall time of `n` calls.
pub fn median_seconds<E, F: FnMut() -> Result<(), E>>(n: usize, warmup: usize, mut f: F) -> Result<f64, E> {
    for _ in 0..warmup {
        f()?;
    }
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        let t = Instant::now();
        f()?;
        times.push(t.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(if n == 0 {
        0.0
    } else if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    })
}

/// Median cost of the timing loop itself around an empty sweep stub.
pub fn harness_overhead(n: usize) -> f64 {
    median_seconds::<(), _>(n, 0, || {
        black_box(());
        Ok(())
    })
    .unwrap_or(0.0)
}

/// Median seconds per sweep on each geometry, from a hot start.
pub fn time_sweeps<T: Real>(
    group: GroupLabel,
    beta: T,
    geometries: &[LatticeGeometry],
    n_timed: usize,
    opts: &TimingOptions,
) -> Result<Vec<TimingRecord>, BenchError> {
    if n_timed < MIN_TIMED_SWEEPS {
        return Err(BenchError::TooFewSweeps {
            got: n_timed,
            min: MIN_TIMED_SWEEPS,
        });
    }
    geometries
        .iter()
        .map(|geo| {
            let params = McParams {
                beta,
                n_sweeps: 0,
                n_therm: 0,
                seed: opts.seed,
                algorithm: opts.algorithm,
                auto_tune: false,
                workers: opts.workers,
                ..McParams::default()
            };
            let mut chain = Chain::new(params, Arc::new(geo.clone()), group, Start::Hot)?;
            let seconds = median_seconds::<WilsonError, _>(n_timed, opts.warmup, || chain.sweep().map(|_| ()))?;
            Ok(TimingRecord {
                extents: geo.extents().to_vec(),
                ns: geo.extent(0),
                volume: geo.volume(),
                links: geo.link_count(),
                group,
                beta: beta.as_f64(),
                algorithm: opts.algorithm,
                seconds_per_sweep: seconds,
                sweeps_timed: n_timed,
                workers: if chain.is_parallel() { opts.workers } else { 1 },
            })
        })
        .collect()
}

pub fn write_timing_csv<W: Write>(records: &[TimingRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{TIMING_CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{},{},{},{:.9e}", r.ns, r.volume, r.links, r.seconds_per_sweep)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauStudyOptions {
    pub group: GroupLabel,
    pub beta: f64,
    /// Temporal extent; lattices are `N_s³ × nt`.
    pub nt: usize,
    pub algorithm: Algorithm,
    pub n_therm: usize,
    pub n_sweeps: usize,
    pub seed: u64,
}

impl Default for TauStudyOptions {
    fn default() -> Self {
        Self {
            group: GroupLabel::SU2,
            beta: 2.2,
            nt: 4,
            algorithm: Algorithm::Heatbath,
            n_therm: 500,
            n_sweeps: 20_000,
            seed: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauRecord {
    pub ns: usize,
    pub tau_int: f64,
    pub window: usize,
    pub series_len: usize,
}

/// τ_int of the average-plaquette series (measured every sweep) for each spatial extent.
pub fn tau_study(ns_values: &[usize], opts: &TauStudyOptions) -> Result<Vec<TauRecord>, BenchError> {
    ns_values
        .iter()
        .map(|&ns| {
            let geo = LatticeGeometry::new(&[ns, ns, ns, opts.nt]).map_err(WilsonError::from)?;
            let params = McParams {
                beta: opts.beta,
                n_sweeps: opts.n_sweeps,
                n_therm: opts.n_therm,
                seed: opts.seed.wrapping_add(ns as u64),
                algorithm: opts.algorithm,
                measure_every: 1,
                ..McParams::default()
            };
            let mut chain = Chain::new(params, Arc::new(geo), opts.group, Start::Hot)?;
            chain.thermalize()?;
            let series = chain.produce()?;
            let AutocorrResult {
                tau_int,
                window,
                series_len,
            } = integrated_autocorrelation(&series.plaquettes())?;
            Ok(TauRecord {
                ns,
                tau_int,
                window,
                series_len,
            })
        })
        .collect()
}

pub fn write_tau_csv<W: Write>(records: &[TauRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{TAU_CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{},{:.9e},{},{}", r.ns, r.tau_int, r.window, r.series_len)?;
    }
    Ok(())
}
