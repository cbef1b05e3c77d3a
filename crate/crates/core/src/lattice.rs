//! Hypercubic lattice bookkeeping with periodic boundaries.
//!
//! Sites are numbered lexicographically with dimension 0 running fastest.
//! Link `(x, μ)` has id `x·ndim + μ`, so links are stored direction-major
//! within each site. The last dimension is the time direction by convention.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DIMS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("number of dimensions must be between 1 and {MAX_DIMS}, got {0}")]
    BadDimension(usize),
    #[error("extent {extent} in direction {direction} is below the minimum of 2")]
    ExtentTooSmall { direction: usize, extent: usize },
    #[error("direction {direction} out of range for a {ndim}-dimensional lattice")]
    DirectionOutOfRange { direction: usize, ndim: usize },
    #[error("checkerboard partition needs even extents; direction {direction} has extent {extent}")]
    OddExtent { direction: usize, extent: usize },
    #[error("invalid plaquette: directions ({mu}, {nu}) must satisfy mu < nu < ndim")]
    BadPlaquette { mu: usize, nu: usize },
    #[error("could not parse lattice dimensions '{0}' (expected e.g. 8x8 or 4,4,4,4)")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Link from site `site` to `site + e_dir`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkIndex {
    pub site: usize,
    pub dir: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedLink {
    pub link: LinkIndex,
    pub orientation: Orientation,
}

/// Elementary square at `site` spanned by directions `mu < nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaquetteIndex {
    pub site: usize,
    pub mu: usize,
    pub nu: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct LatticeGeometry {
    extents: Vec<usize>,
    strides: Vec<usize>,
    volume: usize,
    /// `fwd[x·ndim + μ]` = x + e_μ; `bwd` likewise for x − e_μ.
    fwd: Vec<usize>,
    bwd: Vec<usize>,
}

impl TryFrom<Vec<usize>> for LatticeGeometry {
    type Error = GeometryError;
    fn try_from(extents: Vec<usize>) -> Result<Self, Self::Error> {
        LatticeGeometry::new(&extents)
    }
}

impl From<LatticeGeometry> for Vec<usize> {
    fn from(g: LatticeGeometry) -> Self {
        g.extents
    }
}

impl LatticeGeometry {
    pub fn new(extents: &[usize]) -> Result<Self, GeometryError> {
        let ndim = extents.len();
        if !(1..=MAX_DIMS).contains(&ndim) {
            return Err(GeometryError::BadDimension(ndim));
        }
        for (direction, &extent) in extents.iter().enumerate() {
            if extent < 2 {
                return Err(GeometryError::ExtentTooSmall { direction, extent });
            }
        }
        let mut strides = Vec::with_capacity(ndim);
        let mut volume = 1usize;
        for &l in extents {
            strides.push(volume);
            volume *= l;
        }
        let mut fwd = vec![0; volume * ndim];
        let mut bwd = vec![0; volume * ndim];
        for site in 0..volume {
            for mu in 0..ndim {
                let l = extents[mu];
                let s = strides[mu];
                let c = (site / s) % l;
                fwd[site * ndim + mu] = if c + 1 == l { site - (l - 1) * s } else { site + s };
                bwd[site * ndim + mu] = if c == 0 { site + (l - 1) * s } else { site - s };
            }
        }
        Ok(Self {
            extents: extents.to_vec(),
            strides,
            volume,
            fwd,
            bwd,
        })
    }

    /// Parses `"8x8"`, `"4x4x4x4"` or `"4,4,4,4"`.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let extents: Result<Vec<usize>, _> = text
            .split(|c| c == 'x' || c == 'X' || c == ',')
            .map(|s| s.trim().parse::<usize>())
            .collect();
        let extents = extents.map_err(|_| GeometryError::Parse(text.to_string()))?;
        Self::new(&extents)
    }

    #[inline]
    pub fn ndim(&self) -> usize {
        self.extents.len()
    }

    #[inline]
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    #[inline]
    pub fn extent(&self, dir: usize) -> usize {
        self.extents[dir]
    }

    #[inline]
    pub fn volume(&self) -> usize {
        self.volume
    }

    #[inline]
    pub fn link_count(&self) -> usize {
        self.volume * self.ndim()
    }

    #[inline]
    pub fn plaquettes_per_site(&self) -> usize {
        let d = self.ndim();
        d * (d - 1) / 2
    }

    #[inline]
    pub fn plaquette_count(&self) -> usize {
        self.volume * self.plaquettes_per_site()
    }

    /// The time direction (last dimension).
    #[inline]
    pub fn time_dir(&self) -> usize {
        self.ndim() - 1
    }

    /// Sites in a single time slice.
    pub fn spatial_volume(&self) -> usize {
        self.volume / self.extents[self.time_dir()]
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        self.extents
            .iter()
            .zip(&self.strides)
            .map(|(&l, &s)| (site / s) % l)
            .collect()
    }

    #[inline]
    pub fn coord(&self, site: usize, dir: usize) -> usize {
        (site / self.strides[dir]) % self.extents[dir]
    }

    /// Site index of a coordinate tuple; coordinates are reduced periodically.
    pub fn site_index(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.ndim(), "coordinate arity");
        coords
            .iter()
            .zip(self.extents.iter().zip(&self.strides))
            .map(|(&c, (&l, &s))| (c % l) * s)
            .sum()
    }

    pub fn neighbor(
        &self,
        site: usize,
        dir: usize,
        orientation: Orientation,
    ) -> Result<usize, GeometryError> {
        if dir >= self.ndim() {
            return Err(GeometryError::DirectionOutOfRange {
                direction: dir,
                ndim: self.ndim(),
            });
        }
        Ok(match orientation {
            Orientation::Forward => self.fwd[site * self.ndim() + dir],
            Orientation::Backward => self.bwd[site * self.ndim() + dir],
        })
    }

    /// `site + e_dir` (unchecked direction).
    #[inline]
    pub fn forward(&self, site: usize, dir: usize) -> usize {
        self.fwd[site * self.extents.len() + dir]
    }

    /// `site − e_dir` (unchecked direction).
    #[inline]
    pub fn backward(&self, site: usize, dir: usize) -> usize {
        self.bwd[site * self.extents.len() + dir]
    }

    #[inline]
    pub fn link_id(&self, link: LinkIndex) -> usize {
        link.site * self.ndim() + link.dir
    }

    #[inline]
    pub fn link_from_id(&self, id: usize) -> LinkIndex {
        LinkIndex {
            site: id / self.ndim(),
            dir: id % self.ndim(),
        }
    }

    pub fn plaquette(&self, site: usize, mu: usize, nu: usize) -> Result<PlaquetteIndex, GeometryError> {
        if !(mu < nu && nu < self.ndim()) || site >= self.volume {
            return Err(GeometryError::BadPlaquette { mu, nu });
        }
        Ok(PlaquetteIndex { site, mu, nu })
    }

    pub fn plaquette_id(&self, p: PlaquetteIndex) -> usize {
        let d = self.ndim();
        // pairs (mu, nu) with mu < nu enumerated lexicographically
        let pair = p.mu * (2 * d - p.mu - 1) / 2 + (p.nu - p.mu - 1);
        p.site * self.plaquettes_per_site() + pair
    }

    pub fn sites(&self) -> std::ops::Range<usize> {
        0..self.volume
    }

    pub fn links(&self) -> impl Iterator<Item = LinkIndex> + '_ {
        (0..self.link_count()).map(move |id| self.link_from_id(id))
    }

    /// Every plaquette once, ordered by site then by `(mu, nu)`.
    pub fn plaquettes(&self) -> impl Iterator<Item = PlaquetteIndex> + '_ {
        let d = self.ndim();
        self.sites().flat_map(move |site| {
            (0..d).flat_map(move |mu| ((mu + 1)..d).map(move |nu| PlaquetteIndex { site, mu, nu }))
        })
    }

    /// The four links of a plaquette, ordered around the loop
    /// x → x+μ → x+μ+ν → x+ν → x, so that the oriented product is
    /// `U₁ U₂ U₃† U₄†`.
    pub fn plaquette_links(&self, p: PlaquetteIndex) -> [OrientedLink; 4] {
        let x = p.site;
        let xm = self.forward(x, p.mu);
        let xn = self.forward(x, p.nu);
        let ol = |site, dir, orientation| OrientedLink {
            link: LinkIndex { site, dir },
            orientation,
        };
        [
            ol(x, p.mu, Orientation::Forward),
            ol(xm, p.nu, Orientation::Forward),
            ol(xn, p.mu, Orientation::Backward),
            ol(x, p.nu, Orientation::Backward),
        ]
    }

    /// The 2(ndim − 1) plaquettes that contain a link.
    pub fn plaquettes_containing(&self, link: LinkIndex) -> Vec<PlaquetteIndex> {
        let mut out = Vec::with_capacity(2 * (self.ndim() - 1));
        let mu = link.dir;
        for nu in 0..self.ndim() {
            if nu == mu {
                continue;
            }
            let (a, b) = if mu < nu { (mu, nu) } else { (nu, mu) };
            out.push(PlaquetteIndex {
                site: link.site,
                mu: a,
                nu: b,
            });
            out.push(PlaquetteIndex {
                site: self.backward(link.site, nu),
                mu: a,
                nu: b,
            });
        }
        out
    }

    /// Partitions all links into sets whose members share no plaquette.
    ///
    /// Set `2μ + p` holds the links in direction μ whose coordinate sum over
    /// the other directions has parity `p`. Requires even extents so the
    /// parity is consistent across the periodic wrap.
    pub fn checkerboard_partition(&self) -> Result<Vec<Vec<LinkIndex>>, GeometryError> {
        for (direction, &extent) in self.extents.iter().enumerate() {
            if extent % 2 != 0 {
                return Err(GeometryError::OddExtent { direction, extent });
            }
        }
        let d = self.ndim();
        let mut sets = vec![Vec::new(); 2 * d];
        for site in self.sites() {
            let total: usize = (0..d).map(|k| self.coord(site, k)).sum();
            for mu in 0..d {
                let parity = (total - self.coord(site, mu)) % 2;
                sets[2 * mu + parity].push(LinkIndex { site, dir: mu });
            }
        }
        Ok(sets)
    }
}
