//! The fermion measurement side of the pipeline. It only ever sees gauge
//! fields through interchange files.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::fermion::{hopping_operator, FermionParams, SolveOptions};
use crate::wilson::GaugeConfiguration;

use super::format::decode_config;
use super::HybridError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermionMeasurement {
    pub sweep: u64,
    /// `log |det H|` of the hopping operator.
    pub log_abs_det: f64,
    pub det_phase: Complex<f64>,
    /// Values in the order of [`observable_names`].
    pub observables: Vec<f64>,
}

/// `plaquette` followed by `corr_t{t}` for every time slice.
pub fn observable_names(nt: usize) -> Vec<String> {
    std::iter::once("plaquette".to_string())
        .chain((0..nt).map(|t| format!("corr_t{t}")))
        .collect()
}

/// Determinant, average plaquette and the color-averaged time-slice
/// correlator `C(t) = (1/N) Σ_{a,b} Σ_{x: x_t = t} |G_{(x,b),(0,a)}|²`.
pub fn measure_config(
    config: &GaugeConfiguration<f64>,
    sweep: u64,
    params: &FermionParams<f64>,
    opts: &SolveOptions,
) -> Result<FermionMeasurement, HybridError> {
    let geo = config.geometry();
    let h = hopping_operator(config, params)?;
    let det = h.determinant()?;
    let n = config.group().n();
    let t_dir = geo.time_dir();
    let mut corr = vec![0.0; geo.extent(t_dir)];
    for a in 0..n {
        let g = h.propagator(0, a, opts)?;
        for x in geo.sites() {
            let t = geo.coord(x, t_dir);
            for b in 0..n {
                corr[t] += g.x[h.index(x, b)].norm_sqr();
            }
        }
    }
    let mut observables = vec![config.average_plaquette()];
    observables.extend(corr.iter().map(|c| c / n as f64));
    Ok(FermionMeasurement {
        sweep,
        log_abs_det: det.log_abs,
        det_phase: det.phase,
        observables,
    })
}

/// Imports one interchange file and measures it.
pub fn measure_file(
    path: impl AsRef<Path>,
    params: &FermionParams<f64>,
    opts: &SolveOptions,
) -> Result<FermionMeasurement, HybridError> {
    let (config, header) = decode_config::<f64>(&fs::read(path)?)?;
    measure_config(&config, header.metadata.sweep, params, opts)
}
