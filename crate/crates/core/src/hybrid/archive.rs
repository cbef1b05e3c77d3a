use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::group::GroupLabel;
use crate::scalar::Real;
use crate::wilson::GaugeConfiguration;

use super::format::{decode_config, encode_config, ConfigMetadata, FormatHeader, FORMAT_VERSION};
use super::HybridError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub file: String,
    pub sweep: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveManifest {
    pub format_version: u32,
    pub group: GroupLabel,
    pub extents: Vec<usize>,
    pub beta: f64,
    pub seed: u64,
    pub entries: Vec<ArchiveEntry>,
}

/// Directory of `LGC1` files sharing one geometry and group, listed in
/// `manifest.json` with strictly increasing sweep indices. Append-only.
#[derive(Debug)]
pub struct ConfigArchive {
    dir: PathBuf,
    manifest: ArchiveManifest,
}

pub fn snapshot_file_name(sweep: u64) -> String {
    format!("cfg_{sweep:08}.lgc")
}

impl ConfigArchive {
    /// Starts an empty archive; fails if `dir` already holds a manifest.
    pub fn create(
        dir: impl AsRef<Path>,
        group: GroupLabel,
        extents: &[usize],
        beta: f64,
        seed: u64,
    ) -> Result<Self, HybridError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        if dir.join(MANIFEST_NAME).exists() {
            return Err(HybridError::Archive(format!("{} already contains an archive", dir.display())));
        }
        let archive = Self {
            dir,
            manifest: ArchiveManifest {
                format_version: FORMAT_VERSION,
                group,
                extents: extents.to_vec(),
                beta,
                seed,
                entries: Vec::new(),
            },
        };
        archive.write_manifest()?;
        Ok(archive)
    }

    pub fn open(dir: impl AsRef<Path>) -> Result<Self, HybridError> {
        let dir = dir.as_ref().to_path_buf();
        let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
        let manifest: ArchiveManifest = serde_json::from_str(&text)?;
        if manifest.entries.windows(2).any(|w| w[0].sweep >= w[1].sweep) {
            return Err(HybridError::Archive("manifest sweep indices are not increasing".into()));
        }
        Ok(Self { dir, manifest })
    }

    fn write_manifest(&self) -> Result<(), HybridError> {
        let tmp = self.dir.join(format!("{MANIFEST_NAME}.tmp"));
        fs::write(&tmp, serde_json::to_string_pretty(&self.manifest)?)?;
        fs::rename(tmp, self.dir.join(MANIFEST_NAME))?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn manifest(&self) -> &ArchiveManifest {
        &self.manifest
    }

    pub fn len(&self) -> usize {
        self.manifest.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.manifest.entries.is_empty()
    }

    pub fn path(&self, i: usize) -> PathBuf {
        self.dir.join(&self.manifest.entries[i].file)
    }

    pub fn paths(&self) -> Vec<PathBuf> {
        (0..self.len()).map(|i| self.path(i)).collect()
    }

    /// Writes `config` as the snapshot taken after `sweep` sweeps.
    pub fn append<T: Real>(&mut self, config: &GaugeConfiguration<T>, sweep: u64) -> Result<PathBuf, HybridError> {
        let m = &self.manifest;
        if config.group() != m.group || config.geometry().extents() != m.extents.as_slice() {
            return Err(HybridError::Archive(format!(
                "snapshot is {} on {:?}, archive holds {} on {:?}",
                config.group(),
                config.geometry().extents(),
                m.group,
                m.extents
            )));
        }
        if let Some(last) = m.entries.last() {
            if sweep <= last.sweep {
                return Err(HybridError::Archive(format!(
                    "sweep {sweep} does not follow the last archived sweep {}",
                    last.sweep
                )));
            }
        }
        let meta = ConfigMetadata {
            beta: m.beta,
            seed: m.seed,
            sweep,
        };
        let file = snapshot_file_name(sweep);
        let path = self.dir.join(&file);
        fs::write(&path, encode_config(config, &meta))?;
        self.manifest.entries.push(ArchiveEntry { file, sweep });
        self.write_manifest()?;
        Ok(path)
    }

    /// Loads snapshot `i` and checks it against the manifest.
    pub fn load<T: Real>(&self, i: usize) -> Result<(GaugeConfiguration<T>, FormatHeader), HybridError> {
        let (config, header) = decode_config::<T>(&fs::read(self.path(i))?)?;
        let m = &self.manifest;
        if header.group != m.group || header.extents != m.extents || header.metadata.sweep != m.entries[i].sweep {
            return Err(HybridError::Archive(format!(
                "{} disagrees with the manifest",
                m.entries[i].file
            )));
        }
        Ok((config, header))
    }
}
