use std::path::Path;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::integrated_autocorrelation;
use crate::fermion::{FermionParams, SolveOptions};
use crate::group::GroupLabel;
use crate::lattice::LatticeGeometry;
use crate::wilson::{Chain, McParams, Start, WilsonError};

use super::archive::ConfigArchive;
use super::fermion_side::{measure_file, observable_names, FermionMeasurement};
use super::HybridError;

/// Weight sums below this fraction of `Σ|w|` are reported as overlap failure.
pub const MIN_WEIGHT_SUM_RATIO: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strategy2Params {
    pub mc: McParams<f64>,
    pub extents: Vec<usize>,
    pub group: GroupLabel,
    pub start: Start,
    pub fermion: FermionParams<f64>,
    pub n_configs: usize,
    /// Sweeps after thermalization used to estimate τ_int of the plaquette.
    pub pilot_sweeps: usize,
    /// Lower bound on the sweep separation between archived snapshots.
    pub min_separation: usize,
}

impl Strategy2Params {
    pub fn new(mc: McParams<f64>, extents: &[usize], group: GroupLabel, fermion: FermionParams<f64>, n_configs: usize) -> Self {
        Self {
            mc,
            extents: extents.to_vec(),
            group,
            start: Start::Cold,
            fermion,
            n_configs,
            pilot_sweeps: 400,
            min_separation: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    /// Imaginary part of the ratio; zero for real weights.
    pub imag: f64,
    /// Jackknife error of the real part.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReweightingResult {
    pub measurements: Vec<FermionMeasurement>,
    /// Plain averages over the quenched snapshots.
    pub quenched: Vec<Estimate>,
    /// `⟨O det H⟩ / ⟨det H⟩` over the same snapshots.
    pub reweighted: Vec<Estimate>,
    /// `|Σ w| / Σ |w|`; one when all weights share a phase.
    pub weight_sum_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strategy2Report {
    pub separation: usize,
    pub tau_int: Option<f64>,
    /// Why τ_int could not be estimated, when it could not.
    pub tau_note: Option<String>,
    pub files: Vec<String>,
    pub result: ReweightingResult,
}

// Division that stays exact when both operands are real.
fn cdiv(a: Complex<f64>, b: Complex<f64>) -> Complex<f64> {
    if a.im == 0.0 && b.im == 0.0 {
        Complex::new(a.re / b.re, 0.0)
    } else {
        a / b
    }
}

fn ratio_estimates(names: &[String], obs: &[Vec<f64>], w: &[Complex<f64>]) -> Vec<Estimate> {
    let n = w.len();
    let den: Complex<f64> = w.iter().sum();
    names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let num: Complex<f64> = w.iter().zip(obs).map(|(wi, o)| wi * o[k]).sum();
            let full = cdiv(num, den);
            let jack: Vec<f64> = (0..n).map(|i| cdiv(num - w[i] * obs[i][k], den - w[i]).re).collect();
            let mean = jack.iter().sum::<f64>() / n as f64;
            let var = jack.iter().map(|j| (j - mean).powi(2)).sum::<f64>() * (n - 1) as f64 / n as f64;
            Estimate {
                name: name.clone(),
                value: full.re,
                imag: full.im,
                error: var.sqrt(),
            }
        })
        .collect()
}

/// Quenched and determinant-reweighted estimates with jackknife errors.
/// Weights are `det_i / max_j |det_j|`, so they never overflow.
pub fn reweight(measurements: Vec<FermionMeasurement>, names: &[String]) -> Result<ReweightingResult, HybridError> {
    if measurements.len() < 2 {
        return Err(HybridError::InvalidParams(format!(
            "reweighting needs at least 2 configurations, got {}",
            measurements.len()
        )));
    }
    let max_log = measurements
        .iter()
        .map(|m| m.log_abs_det)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_log == f64::NEG_INFINITY {
        return Err(HybridError::ZeroDeterminantSum { ratio: 0.0 });
    }
    let w: Vec<Complex<f64>> = measurements
        .iter()
        .map(|m| m.det_phase * (m.log_abs_det - max_log).exp())
        .collect();
    let abs_sum: f64 = w.iter().map(|z| z.norm()).sum();
    let ratio = w.iter().sum::<Complex<f64>>().norm() / abs_sum;
    if !(ratio > MIN_WEIGHT_SUM_RATIO) {
        return Err(HybridError::ZeroDeterminantSum { ratio });
    }
    let obs: Vec<Vec<f64>> = measurements.iter().map(|m| m.observables.clone()).collect();
    let ones = vec![Complex::new(1.0, 0.0); w.len()];
    Ok(ReweightingResult {
        quenched: ratio_estimates(names, &obs, &ones),
        reweighted: ratio_estimates(names, &obs, &w),
        weight_sum_ratio: ratio,
        measurements,
    })
}

/// Generates quenched snapshots, hands each to the fermion side through an
/// interchange file in `archive_dir`, and reweights.
pub fn strategy2_run(params: &Strategy2Params, archive_dir: impl AsRef<Path>) -> Result<Strategy2Report, HybridError> {
    if params.n_configs < 2 {
        return Err(HybridError::InvalidParams("n_configs must be at least 2".into()));
    }
    params.fermion.validate()?;
    let geometry = Arc::new(LatticeGeometry::new(&params.extents).map_err(WilsonError::from)?);
    let nt = geometry.extent(geometry.time_dir());
    let mut chain = Chain::new(params.mc.clone(), geometry, params.group, params.start)?;
    chain.thermalize()?;

    let mut pilot = Vec::with_capacity(params.pilot_sweeps);
    for _ in 0..params.pilot_sweeps {
        chain.sweep()?;
        pilot.push(chain.config().average_plaquette());
    }
    let (tau_int, tau_note) = match integrated_autocorrelation(&pilot) {
        Ok(r) => (Some(r.tau_int), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let separation = tau_int.map_or(params.min_separation, |t| {
        params.min_separation.max((2.0 * t).ceil() as usize)
    });

    let mut archive = ConfigArchive::create(
        archive_dir,
        params.group,
        &params.extents,
        params.mc.beta,
        params.mc.seed,
    )?;
    let opts = SolveOptions::default();
    let mut measurements = Vec::with_capacity(params.n_configs);
    for _ in 0..params.n_configs {
        for _ in 0..separation {
            chain.sweep()?;
        }
        let path = archive.append(chain.config(), chain.sweeps_done())?;
        measurements.push(measure_file(&path, &params.fermion, &opts)?);
    }
    let files = archive.manifest().entries.iter().map(|e| e.file.clone()).collect();
    Ok(Strategy2Report {
        separation,
        tau_int,
        tau_note,
        files,
        result: reweight(measurements, &observable_names(nt))?,
    })
}

/// Recomputes the reweighting from archived files alone.
pub fn replay_archive(
    archive_dir: impl AsRef<Path>,
    fermion: &FermionParams<f64>,
) -> Result<ReweightingResult, HybridError> {
    let archive = ConfigArchive::open(archive_dir)?;
    let nt = *archive
        .manifest()
        .extents
        .last()
        .ok_or_else(|| HybridError::Archive("manifest has no extents".into()))?;
    let opts = SolveOptions::default();
    let measurements = archive
        .paths()
        .par_iter()
        .map(|p| measure_file(p, fermion, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    reweight(measurements, &observable_names(nt))
}
