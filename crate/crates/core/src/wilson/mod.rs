//! Monte Carlo sampling of the Wilson plaquette action.
//!
//! The Boltzmann weight is `exp(−β S)` with
//! `S = Σ_p (1 − (1/N) Re Tr U_p)` and `β = 2N/g²` (N = 1 for U(1)).

mod chain;
mod config;
mod update;

use thiserror::Error;

use crate::group::{GroupError, GroupLabel};
use crate::lattice::GeometryError;
use crate::scalar::Real;

pub use chain::{run_chain, Chain, McParams, Measurement, ObservableSeries, Start, OBSERVABLE_CSV_HEADER};
pub use config::{random_gauge_transform, GaugeConfiguration};
pub use update::{
    Algorithm,
    heatbath_sweep, heatbath_update_link, metropolis_sweep, metropolis_update_link, parallel_sweep,
    sample_su2_x0, sample_von_mises,
};

#[derive(Debug, Error)]
pub enum WilsonError {
    #[error("expected {expected} links, got {got}")]
    LinkCount { expected: usize, got: usize },
    #[error("gauge transformation needs {expected} site elements, got {got}")]
    TransformLength { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("link {link} could not be re-unitarized: {source}")]
    Reunitarize { link: usize, source: GroupError },
    #[error("{algorithm} updates are not available for {group}")]
    UnsupportedGroup { algorithm: &'static str, group: GroupLabel },
    #[error("coupling g² must be positive and finite, got {0}")]
    NonPositiveCoupling(f64),
    #[error("invalid Monte Carlo parameters: {0}")]
    InvalidParams(String),
}

/// `β = 2N/g²`, using N = 1 for U(1).
pub fn beta_from_coupling<T: Real>(g_squared: T, group: GroupLabel) -> Result<T, WilsonError> {
    if !(g_squared > T::zero()) || !g_squared.is_finite() {
        return Err(WilsonError::NonPositiveCoupling(g_squared.as_f64()));
    }
    Ok(T::of_usize(2 * group.n()) / g_squared)
}
