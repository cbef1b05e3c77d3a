pub mod bench;
pub mod cost;
pub mod hamiltonian;
pub mod inspect;
pub mod mc;
pub mod strategy2;

use std::sync::Arc;

use anyhow::Context;
use lattice_gauge::wilson::McParams;
use lattice_gauge::LatticeGeometry;

use crate::args::GaugeArgs;

pub fn geometry(dims: &str) -> anyhow::Result<Arc<LatticeGeometry>> {
    Ok(Arc::new(LatticeGeometry::parse(dims).with_context(|| format!("--dims {dims}"))?))
}

pub fn mc_params(g: &GaugeArgs, n_sweeps: usize, measure_every: usize) -> anyhow::Result<McParams<f64>> {
    Ok(McParams {
        beta: g.resolved_beta()?,
        n_sweeps,
        n_therm: g.therm,
        seed: g.seed,
        proposal_step: g.step,
        measure_every,
        hits: g.hits,
        algorithm: g.resolved_algorithm(),
        workers: g.workers,
        ..McParams::default()
    })
}

pub const SITE_ORDER_NOTE: &str = "sites are numbered with the first axis fastest; the last axis is time";
