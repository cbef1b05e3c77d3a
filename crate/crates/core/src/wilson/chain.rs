use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::group::GroupLabel;
use crate::lattice::{LatticeGeometry, LinkIndex};
use crate::rng::{rng_stream, worker_streams, RngStream};
use crate::scalar::Real;

use super::config::GaugeConfiguration;
use super::update::{heatbath_sweep, metropolis_sweep, parallel_sweep};
pub use super::update::Algorithm;
use super::WilsonError;

pub const OBSERVABLE_CSV_HEADER: &str = "sweep,plaquette,action,polyakov_re,polyakov_im";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Hot,
    Cold,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McParams<T> {
    pub beta: T,
    pub n_sweeps: usize,
    pub n_therm: usize,
    pub seed: u64,
    /// Metropolis kick size in `(0, π]`; the starting value when auto-tuning.
    pub proposal_step: T,
    pub measure_every: usize,
    pub hits: usize,
    pub algorithm: Algorithm,
    /// Adjust the Metropolis step toward 50% acceptance during thermalization.
    pub auto_tune: bool,
    /// Re-project all links every this many sweeps; 0 disables.
    pub reunitarize_every: usize,
    /// 1 runs the sequential sweep; more uses the checkerboard parallel sweep.
    pub workers: usize,
}

impl<T: Real> Default for McParams<T> {
    fn default() -> Self {
        Self {
            beta: T::one(),
            n_sweeps: 1000,
            n_therm: 100,
            seed: 0,
            proposal_step: T::of(0.5),
            measure_every: 1,
            hits: 1,
            algorithm: Algorithm::Metropolis,
            auto_tune: true,
            reunitarize_every: 100,
            workers: 1,
        }
    }
}

impl<T: Real> McParams<T> {
    pub fn validate(&self) -> Result<(), WilsonError> {
        let bad = |m: String| Err(WilsonError::InvalidParams(m));
        if self.beta.is_nan() || self.beta < T::zero() {
            return bad(format!("beta must be non-negative, got {}", self.beta));
        }
        if !(self.proposal_step > T::zero() && self.proposal_step <= T::PI()) {
            return bad(format!("proposal step must lie in (0, π], got {}", self.proposal_step));
        }
        if self.measure_every == 0 {
            return bad("measure_every must be at least 1".into());
        }
        if self.hits == 0 {
            return bad("hits must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }
}

/// One row of the observable series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub sweep: u64,
    pub plaquette: f64,
    pub action: f64,
    pub polyakov: Option<Complex<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub records: Vec<Measurement>,
    /// Mean acceptance over the measured part of the chain (1 for heatbath).
    pub acceptance: f64,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn plaquettes(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.plaquette).collect()
    }

    /// CSV with 17 significant digits per float.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{OBSERVABLE_CSV_HEADER}")?;
        for r in &self.records {
            write!(w, "{},{:.16e},{:.16e}", r.sweep, r.plaquette, r.action)?;
            match r.polyakov {
                Some(p) => writeln!(w, ",{:.16e},{:.16e}", p.re, p.im)?,
                None => writeln!(w, ",,")?,
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

struct Parallel {
    partition: Vec<Vec<LinkIndex>>,
    streams: Vec<RngStream>,
}

/// A Markov chain with its own configuration and random streams.
pub struct Chain<T> {
    config: GaugeConfiguration<T>,
    params: McParams<T>,
    step: T,
    rng: RngStream,
    parallel: Option<Parallel>,
    sweeps_done: u64,
}

impl<T: Real> Chain<T> {
    pub fn new(
        params: McParams<T>,
        geometry: Arc<LatticeGeometry>,
        group: GroupLabel,
        start: Start,
    ) -> Result<Self, WilsonError> {
        params.validate()?;
        params.algorithm.check_group(group)?;
        let mut rng = rng_stream(params.seed);
        let config = match start {
            Start::Cold => GaugeConfiguration::cold(geometry, group),
            Start::Hot => GaugeConfiguration::hot(geometry, group, &mut rng),
        };
        Self::from_config(params, config, rng)
    }

    /// Continues from an existing configuration with a fresh stream for `params.seed`.
    pub fn resume(params: McParams<T>, config: GaugeConfiguration<T>, sweeps_done: u64) -> Result<Self, WilsonError> {
        params.validate()?;
        params.algorithm.check_group(config.group())?;
        let rng = rng_stream(params.seed);
        let mut chain = Self::from_config(params, config, rng)?;
        chain.sweeps_done = sweeps_done;
        Ok(chain)
    }

    fn from_config(params: McParams<T>, config: GaugeConfiguration<T>, rng: RngStream) -> Result<Self, WilsonError> {
        // Odd extents have no checkerboard; such lattices run sequentially.
        let parallel = if params.workers > 1 {
            config.geometry().checkerboard_partition().ok().map(|partition| Parallel {
                partition,
                streams: worker_streams(params.seed, params.workers),
            })
        } else {
            None
        };
        Ok(Self {
            step: params.proposal_step,
            config,
            params,
            rng,
            parallel,
            sweeps_done: 0,
        })
    }

    pub fn config(&self) -> &GaugeConfiguration<T> {
        &self.config
    }

    pub fn into_config(self) -> GaugeConfiguration<T> {
        self.config
    }

    pub fn params(&self) -> &McParams<T> {
        &self.params
    }

    /// Current Metropolis step (after any tuning).
    pub fn step(&self) -> T {
        self.step
    }

    pub fn sweeps_done(&self) -> u64 {
        self.sweeps_done
    }

    pub fn is_parallel(&self) -> bool {
        self.parallel.is_some()
    }

    /// One sweep; returns its acceptance rate.
    pub fn sweep(&mut self) -> Result<f64, WilsonError> {
        let p = &self.params;
        let rate = match (&mut self.parallel, p.algorithm) {
            (Some(par), alg) => parallel_sweep(
                &mut self.config,
                alg,
                p.beta,
                self.step,
                p.hits,
                &par.partition,
                &mut par.streams,
            )?,
            (None, Algorithm::Metropolis) => metropolis_sweep(&mut self.config, p.beta, self.step, p.hits, &mut self.rng),
            (None, Algorithm::Heatbath) => {
                heatbath_sweep(&mut self.config, p.beta, &mut self.rng)?;
                1.0
            }
        };
        self.sweeps_done += 1;
        if p.reunitarize_every > 0 && self.sweeps_done % p.reunitarize_every as u64 == 0 {
            self.config.reunitarize()?;
        }
        Ok(rate)
    }

    /// Runs the thermalization sweeps, tuning the Metropolis step if enabled.
    pub fn thermalize(&mut self) -> Result<(), WilsonError> {
        for _ in 0..self.params.n_therm {
            let rate = self.sweep()?;
            if self.params.auto_tune && self.params.algorithm == Algorithm::Metropolis {
                let factor = T::of((rate / 0.5).clamp(0.8, 1.25));
                self.step = (self.step * factor).max(T::of(0.01)).min(T::PI());
            }
        }
        Ok(())
    }

    pub fn measure(&self) -> Measurement {
        Measurement {
            sweep: self.sweeps_done,
            plaquette: self.config.average_plaquette().as_f64(),
            action: self.config.action().as_f64(),
            polyakov: Some(crate::scalar::convert_complex(self.config.polyakov_loop())),
        }
    }

    /// Production sweeps, measuring every `measure_every` sweeps.
    pub fn produce(&mut self) -> Result<ObservableSeries, WilsonError> {
        let mut series = ObservableSeries::default();
        let mut rate_sum = 0.0;
        for i in 1..=self.params.n_sweeps {
            rate_sum += self.sweep()?;
            if i % self.params.measure_every == 0 {
                series.records.push(self.measure());
            }
        }
        series.acceptance = if self.params.n_sweeps == 0 {
            1.0
        } else {
            rate_sum / self.params.n_sweeps as f64
        };
        Ok(series)
    }
}

/// Thermalizes, then measures; returns the series and the final configuration.
pub fn run_chain<T: Real>(
    params: &McParams<T>,
    geometry: Arc<LatticeGeometry>,
    group: GroupLabel,
    start: Start,
) -> Result<(ObservableSeries, GaugeConfiguration<T>), WilsonError> {
    let mut chain = Chain::new(params.clone(), geometry, group, start)?;
    chain.thermalize()?;
    let series = chain.produce()?;
    Ok((series, chain.into_config()))
}
