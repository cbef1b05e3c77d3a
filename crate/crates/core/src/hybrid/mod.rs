//! Quenched backgrounds handed to a separate fermion side through a
//! bit-exact file format, determinant reweighting, condensate links and the
//! dynamical-fermion cost law.

pub mod archive;
pub mod condensate;
pub mod cost;
pub mod fermion_side;
pub mod format;
pub mod pipeline;

use thiserror::Error;

use crate::fermion::FermionError;
use crate::wilson::WilsonError;

pub use archive::{snapshot_file_name, ArchiveEntry, ArchiveManifest, ConfigArchive, MANIFEST_NAME};
pub use condensate::{
    condensate_link, condensate_links, condensate_plaquette_trace, polar_project, summed_condensate_link, SiteVector,
};
pub use cost::{cost_estimate, CostQuery};
pub use fermion_side::{measure_config, measure_file, observable_names, FermionMeasurement};
pub use format::{
    decode_config, decode_header, encode_config, export_config, import_config, inspect, ConfigMetadata, FormatError,
    FormatHeader, InspectReport, FORMAT_VERSION, MAGIC,
};
pub use pipeline::{
    replay_archive, reweight, strategy2_run, Estimate, ReweightingResult, Strategy2Params, Strategy2Report,
};

#[derive(Debug, Error)]
pub enum HybridError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Wilson(#[from] WilsonError),
    #[error(transparent)]
    Fermion(#[from] FermionError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("archive error: {0}")]
    Archive(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("determinant weights nearly cancel (|Σw|/Σ|w| = {ratio:e}); reweighting overlap has failed")]
    ZeroDeterminantSum { ratio: f64 },
    #[error("cost ratios must be positive and finite, got size {size}, spacing {spacing}")]
    InvalidCost { size: f64, spacing: f64 },
    #[error("matrix is rank deficient (singular value ratio {ratio:e}); polar projection is not unique")]
    RankDeficient { ratio: f64 },
}
