//! Binary gauge-configuration interchange (`LGC1`).
//!
//! Layout, all little-endian: magic `LGC1`, version `u32`, group N `u32`,
//! ndim `u32`, extents `ndim × u32`, β `f64`, seed `u64`, sweep `u64`, then
//! the link payload and a CRC-32 of the payload. Links follow the site
//! index (first axis fastest), direction-major within a site; each matrix is
//! row-major with `(re, im)` pairs of `f64`.

use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ColorMatrix, GroupElement, GroupLabel};
use crate::lattice::{LatticeGeometry, MAX_DIMS};
use crate::scalar::Real;
use crate::wilson::GaugeConfiguration;

pub const MAGIC: [u8; 4] = *b"LGC1";
pub const FORMAT_VERSION: u32 = 1;
/// Largest accepted `‖U†U − I‖` (and `|det U − 1|` for SU(N)) on import.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("bad magic bytes {0:?}")]
    BadMagic(Vec<u8>),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("checksum mismatch ({detail})")]
    ChecksumMismatch { detail: String },
    #[error("link {link} is not a valid group element (defect {defect:e})")]
    NonUnitary { link: usize, defect: f64 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e.to_string())
    }
}

/// Run metadata stored with each configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigMetadata {
    pub beta: f64,
    pub seed: u64,
    pub sweep: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormatHeader {
    pub version: u32,
    pub group: GroupLabel,
    pub extents: Vec<usize>,
    pub metadata: ConfigMetadata,
}

impl FormatHeader {
    fn encoded_len(&self) -> usize {
        4 + 4 * 3 + 4 * self.extents.len() + 8 * 3
    }

    fn payload_len(&self) -> usize {
        let n = self.group.n();
        let links: usize = self.extents.iter().product::<usize>() * self.extents.len();
        links * n * n * 16
    }
}

/// Serializes a configuration to bytes.
pub fn encode_config<T: Real>(config: &GaugeConfiguration<T>, metadata: &ConfigMetadata) -> Vec<u8> {
    let geo = config.geometry();
    let n = config.group().n();
    let mut out = Vec::with_capacity(64 + geo.link_count() * n * n * 16);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(geo.ndim() as u32).to_le_bytes());
    for &l in geo.extents() {
        out.extend_from_slice(&(l as u32).to_le_bytes());
    }
    out.extend_from_slice(&metadata.beta.to_le_bytes());
    out.extend_from_slice(&metadata.seed.to_le_bytes());
    out.extend_from_slice(&metadata.sweep.to_le_bytes());
    let start = out.len();
    for u in config.links() {
        let m = u.matrix();
        for a in 0..n {
            for b in 0..n {
                out.extend_from_slice(&m[(a, b)].re.as_f64().to_le_bytes());
                out.extend_from_slice(&m[(a, b)].im.as_f64().to_le_bytes());
            }
        }
    }
    let crc = crc32fast::hash(&out[start..]);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

pub fn export_config<T: Real, W: Write>(
    config: &GaugeConfiguration<T>,
    metadata: &ConfigMetadata,
    mut sink: W,
) -> Result<(), FormatError> {
    sink.write_all(&encode_config(config, metadata))?;
    sink.flush()?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, k: usize) -> Option<&[u8]> {
        let s = self.bytes.get(self.pos..self.pos + k)?;
        self.pos += k;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }

    fn f64(&mut self) -> Option<f64> {
        self.take(8).map(|b| f64::from_le_bytes(b.try_into().unwrap()))
    }
}

fn truncated(needed: usize, got: usize) -> FormatError {
    FormatError::ChecksumMismatch {
        detail: format!("file truncated: {got} bytes, at least {needed} expected"),
    }
}

/// Parses and validates the header; returns it with the header length.
pub fn decode_header(bytes: &[u8]) -> Result<(FormatHeader, usize), FormatError> {
    let mut c = Cursor { bytes, pos: 0 };
    match c.take(4) {
        Some(m) if m == MAGIC => {}
        Some(m) => return Err(FormatError::BadMagic(m.to_vec())),
        None if MAGIC.starts_with(bytes) => return Err(truncated(4, bytes.len())),
        None => return Err(FormatError::BadMagic(bytes.to_vec())),
    }
    let short = |c: &Cursor| truncated(c.pos + 8, bytes.len());
    let version = c.u32().ok_or_else(|| short(&c))?;
    if version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let n = c.u32().ok_or_else(|| short(&c))?;
    let group = GroupLabel::from_n(n as usize)
        .ok_or_else(|| FormatError::InvalidHeader(format!("group dimension {n} is not 1, 2 or 3")))?;
    let ndim = c.u32().ok_or_else(|| short(&c))? as usize;
    if !(1..=MAX_DIMS).contains(&ndim) {
        return Err(FormatError::InvalidHeader(format!("{ndim} dimensions")));
    }
    let mut extents = Vec::with_capacity(ndim);
    for _ in 0..ndim {
        let l = c.u32().ok_or_else(|| short(&c))? as usize;
        if l < 2 {
            return Err(FormatError::InvalidHeader(format!("extent {l} below 2")));
        }
        extents.push(l);
    }
    let beta = c.f64().ok_or_else(|| short(&c))?;
    let seed = c.u64().ok_or_else(|| short(&c))?;
    let sweep = c.u64().ok_or_else(|| short(&c))?;
    let header = FormatHeader {
        version,
        group,
        extents,
        metadata: ConfigMetadata { beta, seed, sweep },
    };
    Ok((header, c.pos))
}

/// Header plus checksum verification over the raw payload bytes.
fn verified_payload(bytes: &[u8]) -> Result<(FormatHeader, &[u8]), FormatError> {
    let (header, start) = decode_header(bytes)?;
    debug_assert_eq!(start, header.encoded_len());
    let end = start + header.payload_len();
    if bytes.len() < end + 4 {
        return Err(truncated(end + 4, bytes.len()));
    }
    if bytes.len() > end + 4 {
        return Err(FormatError::InvalidHeader(format!(
            "{} trailing bytes after the checksum",
            bytes.len() - end - 4
        )));
    }
    let payload = &bytes[start..end];
    let stored = u32::from_le_bytes(bytes[end..end + 4].try_into().unwrap());
    let actual = crc32fast::hash(payload);
    if stored != actual {
        return Err(FormatError::ChecksumMismatch {
            detail: format!("stored {stored:08x}, computed {actual:08x}"),
        });
    }
    Ok((header, payload))
}

fn link_matrices<'a>(header: &FormatHeader, payload: &'a [u8]) -> impl Iterator<Item = ColorMatrix<f64>> + 'a {
    let n = header.group.n();
    payload.chunks_exact(n * n * 16).map(move |chunk| {
        let entries: Vec<Complex<f64>> = chunk
            .chunks_exact(16)
            .map(|p| {
                Complex::new(
                    f64::from_le_bytes(p[..8].try_into().unwrap()),
                    f64::from_le_bytes(p[8..].try_into().unwrap()),
                )
            })
            .collect();
        ColorMatrix::from_row_major(n, &entries)
    })
}

fn check_link(group: GroupLabel, link: usize, m: ColorMatrix<f64>) -> Result<GroupElement<f64>, FormatError> {
    GroupElement::from_matrix(group, m, UNITARITY_TOLERANCE).map_err(|_| {
        let det = if group.is_special() {
            (m.determinant() - Complex::new(1.0, 0.0)).norm()
        } else {
            0.0
        };
        FormatError::NonUnitary {
            link,
            defect: m.unitarity_defect().max(det),
        }
    })
}

/// Parses, verifies and rebuilds a configuration.
pub fn decode_config<T: Real>(bytes: &[u8]) -> Result<(GaugeConfiguration<T>, FormatHeader), FormatError> {
    let (header, payload) = verified_payload(bytes)?;
    let geometry = LatticeGeometry::new(&header.extents).map_err(|e| FormatError::InvalidHeader(e.to_string()))?;
    let links = link_matrices(&header, payload)
        .enumerate()
        .map(|(i, m)| check_link(header.group, i, m).map(|u| u.convert::<T>()))
        .collect::<Result<Vec<_>, _>>()?;
    let config = GaugeConfiguration::from_links(Arc::new(geometry), header.group, links)
        .map_err(|e| FormatError::InvalidHeader(e.to_string()))?;
    Ok((config, header))
}

pub fn import_config<T: Real, R: Read>(mut source: R) -> Result<(GaugeConfiguration<T>, FormatHeader), FormatError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_config(&bytes)
}

/// Header plus validation verdict, computed from the raw payload without
/// building a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct InspectReport {
    pub header: Option<FormatHeader>,
    pub verdict: Result<(), FormatError>,
}

pub fn inspect(bytes: &[u8]) -> InspectReport {
    let header = decode_header(bytes).ok().map(|(h, _)| h);
    let verdict = verified_payload(bytes).and_then(|(h, payload)| {
        link_matrices(&h, payload)
            .enumerate()
            .try_for_each(|(i, m)| check_link(h.group, i, m).map(|_| ()))
    });
    InspectReport { header, verdict }
}
