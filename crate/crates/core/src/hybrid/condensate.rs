use num_complex::Complex;
use rand::Rng;

use crate::group::{hermitian_eigen, project_to_unitary, ColorMatrix};
use crate::lattice::{LatticeGeometry, PlaquetteIndex};
use crate::rng::gaussian;
use crate::scalar::Real;

use super::HybridError;

/// A complex `N`-vector on every site.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteVector<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SiteVector<T> {
    pub fn new(n: usize, data: Vec<Complex<T>>) -> Self {
        assert!(n >= 1 && data.len() % n == 0, "site vector data must hold whole N-vectors");
        Self { n, data }
    }

    /// Independent standard complex Gaussian components.
    pub fn random<R: Rng + ?Sized>(n: usize, volume: usize, rng: &mut R) -> Self {
        let data = (0..n * volume)
            .map(|_| Complex::new(gaussian(rng), gaussian(rng)))
            .collect();
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn volume(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn at(&self, site: usize) -> &[Complex<T>] {
        &self.data[site * self.n..(site + 1) * self.n]
    }

    pub fn norm_sqr(&self, site: usize) -> T {
        self.at(site).iter().map(|z| z.norm_sqr()).sum()
    }

    /// `φ_x → e^{iα_x} φ_x`.
    pub fn rotate_phases(&self, alphas: &[T]) -> Self {
        assert_eq!(alphas.len(), self.volume());
        let data = self
            .data
            .chunks_exact(self.n)
            .zip(alphas)
            .flat_map(|(v, &a)| {
                let p = Complex::from_polar(T::one(), a);
                v.iter().map(move |z| z * p)
            })
            .collect();
        Self { n: self.n, data }
    }
}

/// Rank-one link `U^{ab} = φ*^a_x φ^b_y`. Not unitary in general.
pub fn condensate_link<T: Real>(phi_x: &[Complex<T>], phi_y: &[Complex<T>]) -> ColorMatrix<T> {
    assert_eq!(phi_x.len(), phi_y.len(), "site vectors of different dimension");
    let conj: Vec<Complex<T>> = phi_x.iter().map(|z| z.conj()).collect();
    ColorMatrix::outer(&conj, phi_y)
}

/// `Σ_h φ*^a_{x,h} φ^b_{y,h}` over a hypercolor index `h`; full rank once
/// there are at least `N` independent hypercolor components.
pub fn summed_condensate_link<T: Real>(phi_x: &[&[Complex<T>]], phi_y: &[&[Complex<T>]]) -> ColorMatrix<T> {
    assert_eq!(phi_x.len(), phi_y.len(), "hypercolor counts differ");
    assert!(!phi_x.is_empty(), "no hypercolor components");
    let mut m = ColorMatrix::zeros(phi_x[0].len());
    for (a, b) in phi_x.iter().zip(phi_y) {
        m += condensate_link(a, b);
    }
    m
}

/// Polar projection onto U(N) (SU(N) when `special`). Fails when the
/// smallest singular value is below `tol` relative to the largest, where
/// the projection is not unique.
pub fn polar_project<T: Real>(m: &ColorMatrix<T>, special: bool, tol: T) -> Result<ColorMatrix<T>, HybridError> {
    let (s2, _) = hermitian_eigen(&m.adjoint_mul(m));
    let hi = s2.iter().fold(T::zero(), |a, &b| a.max(b));
    let lo = s2.iter().fold(T::infinity(), |a, &b| a.min(b));
    if !(hi > T::zero()) || lo.max(T::zero()).sqrt() < tol * hi.sqrt() {
        return Err(HybridError::RankDeficient {
            ratio: (lo.max(T::zero()) / hi).sqrt().as_f64(),
        });
    }
    Ok(project_to_unitary(m, special))
}

/// Condensate link on every link of the lattice, in link-id order.
pub fn condensate_links<T: Real>(geometry: &LatticeGeometry, phi: &SiteVector<T>) -> Vec<ColorMatrix<T>> {
    assert_eq!(geometry.volume(), phi.volume());
    let d = geometry.ndim();
    (0..geometry.link_count())
        .map(|id| {
            let (x, mu) = (id / d, id % d);
            condensate_link(phi.at(x), phi.at(geometry.forward(x, mu)))
        })
        .collect()
}

/// Trace of the oriented plaquette product of condensate links. Backward
/// links use `U† = condensate_link(φ_{y}, φ_x)`.
pub fn condensate_plaquette_trace<T: Real>(
    geometry: &LatticeGeometry,
    phi: &SiteVector<T>,
    p: PlaquetteIndex,
) -> Complex<T> {
    let links = condensate_links(geometry, phi);
    let mut prod = ColorMatrix::identity(phi.n());
    for ol in geometry.plaquette_links(p) {
        let u = links[geometry.link_id(ol.link)];
        prod = match ol.orientation {
            crate::lattice::Orientation::Forward => prod * u,
            crate::lattice::Orientation::Backward => prod.mul_adjoint(&u),
        };
    }
    prod.trace()
}
