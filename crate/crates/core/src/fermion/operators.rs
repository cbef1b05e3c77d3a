use std::sync::Arc;

use num_complex::Complex;

use crate::eigen::hermitian_eigenvalues;
use crate::group::GroupLabel;
use crate::lattice::LatticeGeometry;
use crate::scalar::Real;
use crate::sparse::{CsrBuilder, CsrMatrix};
use crate::wilson::GaugeConfiguration;

use super::dense::{determinant, Determinant, DENSE_BUDGET};
use super::gamma::{gamma_matrices, GammaMatrices};
use super::solver::{propagator, SolveOptions, Solution};
use super::{FermionError, FermionParams};

/// Boundary phase of the forward hop from `site` along `mu`.
fn boundary_phase<T: Real>(geo: &LatticeGeometry, site: usize, mu: usize, antiperiodic: bool) -> T {
    let t = geo.time_dir();
    if antiperiodic && mu == t && geo.coord(site, t) + 1 == geo.extent(t) {
        -T::one()
    } else {
        T::one()
    }
}

/// Single-component hopping operator on a fixed background:
/// `H = m·1 − t Σ_{x,i} (U_{x,i} |x⟩⟨x+i| + h.c.)`, indexed by `site·N + color`.
#[derive(Clone, Debug)]
pub struct HoppingOperator<T> {
    geometry: Arc<LatticeGeometry>,
    group: GroupLabel,
    params: FermionParams<T>,
    matrix: CsrMatrix<Complex<T>>,
}

pub fn hopping_operator<T: Real>(
    config: &GaugeConfiguration<T>,
    params: &FermionParams<T>,
) -> Result<HoppingOperator<T>, FermionError> {
    params.validate()?;
    let geo = config.geometry();
    let n = config.group().n();
    let dim = geo.volume() * n;
    let mut triplets = Vec::with_capacity(dim * (1 + 2 * geo.ndim() * n));
    for x in geo.sites() {
        for a in 0..n {
            triplets.push((x * n + a, x * n + a, Complex::new(params.mass, T::zero())));
        }
        for mu in 0..geo.ndim() {
            let y = geo.forward(x, mu);
            let u = config.link_at(x, mu).matrix();
            let c = -params.hopping * boundary_phase::<T>(geo, x, mu, params.temporal_antiperiodic);
            for a in 0..n {
                for b in 0..n {
                    let v = u[(a, b)] * c;
                    triplets.push((x * n + a, y * n + b, v));
                    triplets.push((y * n + b, x * n + a, v.conj()));
                }
            }
        }
    }
    Ok(HoppingOperator {
        geometry: config.geometry_arc().clone(),
        group: config.group(),
        params: *params,
        matrix: CsrMatrix::from_triplets(dim, dim, triplets),
    })
}

impl<T: Real> HoppingOperator<T> {
    pub fn matrix(&self) -> &CsrMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn group(&self) -> GroupLabel {
        self.group
    }

    pub fn params(&self) -> &FermionParams<T> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn index(&self, site: usize, color: usize) -> usize {
        site * self.group.n() + color
    }

    /// `‖H − H†‖_max`.
    pub fn max_asymmetry(&self) -> T {
        self.matrix.max_asymmetry()
    }

    /// Full ascending spectrum by dense diagonalization.
    pub fn spectrum(&self) -> Result<Vec<T>, FermionError> {
        let n = self.dim();
        if n > DENSE_BUDGET {
            return Err(FermionError::OverBudget {
                dim: n,
                budget: DENSE_BUDGET,
            });
        }
        Ok(hermitian_eigenvalues(n, &self.matrix.to_dense()))
    }

    pub fn determinant(&self) -> Result<Determinant<T>, FermionError> {
        determinant(&self.matrix)
    }

    pub fn propagator(&self, site: usize, color: usize, opts: &SolveOptions) -> Result<Solution<T>, FermionError> {
        propagator(&self.matrix, self.index(site, color), opts)
    }
}

/// Naive lattice Dirac operator
/// `D = Σ_μ γ_μ (U_{x,μ} δ_{x+μ,y} − U†_{y,μ} δ_{x−μ,y}) / 2 − m`,
/// indexed by `(site·N + color)·n_spin + spin`.
#[derive(Clone, Debug)]
pub struct DiracOperator<T> {
    geometry: Arc<LatticeGeometry>,
    group: GroupLabel,
    params: FermionParams<T>,
    gammas: GammaMatrices<T>,
    matrix: CsrMatrix<Complex<T>>,
}

pub fn dirac_operator<T: Real>(
    config: &GaugeConfiguration<T>,
    params: &FermionParams<T>,
) -> Result<DiracOperator<T>, FermionError> {
    params.validate()?;
    let geo = config.geometry();
    let gammas = gamma_matrices::<T>(geo.ndim())?;
    let ns = gammas.spin_dim();
    let n = config.group().n();
    let dim = geo.volume() * n * ns;
    let idx = |x: usize, a: usize, s: usize| (x * n + a) * ns + s;
    let half = T::of(0.5);
    let mut b = CsrBuilder::with_capacity(dim, dim, dim * (1 + 2 * geo.ndim() * n * 2));
    for x in geo.sites() {
        for a in 0..n {
            for s in 0..ns {
                b.push(idx(x, a, s), Complex::new(-params.mass, T::zero()));
                for (mu, g) in gammas.gammas.iter().enumerate() {
                    let fwd = geo.forward(x, mu);
                    let bwd = geo.backward(x, mu);
                    let uf = config.link_at(x, mu).matrix();
                    let ub = config.link_at(bwd, mu).matrix();
                    let pf = half * boundary_phase::<T>(geo, x, mu, params.temporal_antiperiodic);
                    let pb = -half * boundary_phase::<T>(geo, bwd, mu, params.temporal_antiperiodic);
                    for s2 in 0..ns {
                        let gs = g.get(s, s2);
                        if gs.norm() == T::zero() {
                            continue;
                        }
                        for c in 0..n {
                            b.push(idx(fwd, c, s2), gs * uf[(a, c)] * pf);
                            b.push(idx(bwd, c, s2), gs * ub[(c, a)].conj() * pb);
                        }
                    }
                }
                b.finish_row();
            }
        }
    }
    Ok(DiracOperator {
        geometry: config.geometry_arc().clone(),
        group: config.group(),
        params: *params,
        gammas,
        matrix: b.finish(),
    })
}

impl<T: Real> DiracOperator<T> {
    pub fn matrix(&self) -> &CsrMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn params(&self) -> &FermionParams<T> {
        &self.params
    }

    pub fn gammas(&self) -> &GammaMatrices<T> {
        &self.gammas
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn spin_dim(&self) -> usize {
        self.gammas.spin_dim()
    }

    #[inline]
    pub fn index(&self, site: usize, color: usize, spin: usize) -> usize {
        (site * self.group.n() + color) * self.spin_dim() + spin
    }

    /// `1 ⊗ γ₅` on the full index space.
    pub fn gamma5(&self) -> CsrMatrix<Complex<T>> {
        let ns = self.spin_dim();
        let blocks = self.dim() / ns;
        let mut b = CsrBuilder::with_capacity(self.dim(), self.dim(), self.dim());
        for blk in 0..blocks {
            for s in 0..ns {
                for s2 in 0..ns {
                    b.push(blk * ns + s2, self.gammas.gamma5.get(s, s2));
                }
                b.finish_row();
            }
        }
        b.finish()
    }

    /// `‖γ₅ D γ₅ − D†‖_max`.
    pub fn gamma5_hermiticity_defect(&self) -> T {
        let g5 = self.gamma5();
        let lhs = g5.matmul(&self.matrix).matmul(&g5);
        let one = Complex::new(T::one(), T::zero());
        lhs.add_scaled(one, &self.matrix.adjoint(), -one).max_abs()
    }

    pub fn determinant(&self) -> Result<Determinant<T>, FermionError> {
        determinant(&self.matrix)
    }

    pub fn propagator(
        &self,
        site: usize,
        color: usize,
        spin: usize,
        opts: &SolveOptions,
    ) -> Result<Solution<T>, FermionError> {
        propagator(&self.matrix, self.index(site, color, spin), opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_stream;

    fn cold(extents: &[usize], group: GroupLabel) -> GaugeConfiguration<f64> {
        GaugeConfiguration::cold(Arc::new(LatticeGeometry::new(extents).unwrap()), group)
    }

    #[test]
    fn free_ring_spectrum() {
        let cfg = cold(&[8], GroupLabel::SU2);
        let h = hopping_operator(&cfg, &FermionParams::new(0.0, 1.0, false)).unwrap();
        let mut expect: Vec<f64> = (0..8)
            .flat_map(|k| {
                let e = -2.0 * (2.0 * std::f64::consts::PI * k as f64 / 8.0).cos();
                [e, e]
            })
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in h.spectrum().unwrap().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn static_limit_is_mass() {
        let cfg = cold(&[4], GroupLabel::U1);
        let h = hopping_operator(&cfg, &FermionParams::new(0.7, 0.0, false)).unwrap();
        assert_eq!(h.matrix(), &CsrMatrix::identity(4).scale(Complex::new(0.7, 0.0)));
    }

    #[test]
    fn hot_background_is_hermitian_and_gamma5_hermitian() {
        let geo = Arc::new(LatticeGeometry::new(&[2, 2, 2, 2]).unwrap());
        let mut rng = rng_stream(3);
        let cfg = GaugeConfiguration::<f64>::hot(geo, GroupLabel::SU2, &mut rng);
        let p = FermionParams::new(0.1, 1.0, true);
        assert!(hopping_operator(&cfg, &p).unwrap().max_asymmetry() < 1e-15);
        assert!(dirac_operator(&cfg, &p).unwrap().gamma5_hermiticity_defect() < 1e-14);
    }

    #[test]
    fn free_determinant_is_real_positive() {
        let cfg = cold(&[2, 2, 2, 2], GroupLabel::U1);
        let d = dirac_operator(&cfg, &FermionParams::new(0.1, 1.0, true))
            .unwrap()
            .determinant()
            .unwrap();
        assert!(d.phase.im.abs() < 1e-12 && d.phase.re > 0.0);
    }

    #[test]
    fn three_dimensional_dirac_is_rejected() {
        let cfg = cold(&[2, 2, 2], GroupLabel::U1);
        assert!(matches!(
            dirac_operator(&cfg, &FermionParams::new(0.1, 1.0, false)),
            Err(FermionError::UnsupportedDimension(3))
        ));
    }
}
