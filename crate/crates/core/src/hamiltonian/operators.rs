use std::io::{self, Write};
use std::sync::Arc;

use crate::eigen::{lowest_eigenpairs, EigenOptions, EigenPairs, SymmetricOperator};
use crate::lattice::Orientation;
use crate::scalar::Real;
use crate::sparse::{CsrBuilder, CsrMatrix, Entry};

use super::basis::{divergence, GaugeBasis};
use super::HamiltonianError;

/// Signed per-link shifts of the plaquette operator `U_p`: +1 on forward
/// links, −1 on backward links.
pub fn plaquette_shifts(basis: &GaugeBasis) -> Vec<[(usize, i32); 4]> {
    let geo = basis.geometry();
    geo.plaquettes()
        .map(|p| {
            let links = geo.plaquette_links(p);
            let mut out = [(0usize, 0i32); 4];
            for (slot, ol) in out.iter_mut().zip(links) {
                let sign = match ol.orientation {
                    Orientation::Forward => 1,
                    Orientation::Backward => -1,
                };
                *slot = (geo.link_id(ol.link), sign);
            }
            out
        })
        .collect()
}

/// Index of the state reached by adding `sign · shift` to `state`, if it
/// stays within the cutoff and the basis.
#[inline]
fn shifted(basis: &GaugeBasis, code: u64, state: &[i32], shift: &[(usize, i32)], sign: i32) -> Option<usize> {
    let lambda = basis.cutoff();
    let strides = basis.strides();
    let mut c = code as i64;
    for &(l, s) in shift {
        let e = state[l] + sign * s;
        if e.abs() > lambda {
            return None;
        }
        c += (sign * s) as i64 * strides[l] as i64;
    }
    basis.index_of_code(c as u64)
}

/// Diagonal electric-field operator `E_l`.
pub fn electric_operator<S: Entry>(basis: &GaugeBasis, link: usize) -> CsrMatrix<S> {
    let d: Vec<S> = (0..basis.dim())
        .map(|i| S::from_real(<S::Real as Real>::of(basis.electric(i, link) as f64)))
        .collect();
    CsrMatrix::diagonal(&d)
}

/// Link operator `U_l`, raising `E_l` by one unit and annihilating states
/// at `E_l = Λ`. In a Gauss-projected basis every image leaves the basis.
pub fn link_raising_operator<S: Entry>(basis: &GaugeBasis, link: usize) -> CsrMatrix<S> {
    let shift = [(link, 1)];
    let mut b = CsrBuilder::with_capacity(basis.dim(), basis.dim(), basis.dim());
    let mut state = vec![0; basis.n_links()];
    for row in 0..basis.dim() {
        let code = basis.code(row);
        basis.decode_into(code, &mut state);
        // ⟨row| U |col⟩ = 1 when row = col + e_l
        if let Some(col) = shifted(basis, code, &state, &shift, -1) {
            b.push(col, S::one());
        }
        b.finish_row();
    }
    b.finish()
}

/// Plaquette operator `U_p` for the plaquette with the given id.
pub fn plaquette_operator<S: Entry>(basis: &GaugeBasis, plaquette: usize) -> CsrMatrix<S> {
    let shift = plaquette_shifts(basis)[plaquette];
    let mut b = CsrBuilder::new(basis.dim());
    let mut state = vec![0; basis.n_links()];
    for row in 0..basis.dim() {
        let code = basis.code(row);
        basis.decode_into(code, &mut state);
        if let Some(col) = shifted(basis, code, &state, &shift, -1) {
            b.push(col, S::one());
        }
        b.finish_row();
    }
    b.finish()
}

/// Diagonal Gauss-law generator `G_x`: the lattice divergence of `E` at `site`.
pub fn gauss_generator<S: Entry>(basis: &GaugeBasis, site: usize) -> CsrMatrix<S> {
    let mut state = vec![0; basis.n_links()];
    let d: Vec<S> = (0..basis.dim())
        .map(|i| {
            basis.decode_into(basis.code(i), &mut state);
            S::from_real(<S::Real as Real>::of(divergence(basis.geometry(), &state, site) as f64))
        })
        .collect();
    CsrMatrix::diagonal(&d)
}

/// Truncated U(1) Hamiltonian
/// `H = (g²/2) Σ_l E_l² − (2/g²) Σ_p (1 − ½(U_p + U_p†))`
/// as a real symmetric sparse matrix over a [`GaugeBasis`].
#[derive(Clone, Debug)]
pub struct HamiltonianOperator<T> {
    basis: Arc<GaugeBasis>,
    g_squared: T,
    matrix: CsrMatrix<T>,
}

pub fn build_hamiltonian<T: Real + Entry<Real = T>>(
    basis: Arc<GaugeBasis>,
    g_squared: T,
) -> Result<HamiltonianOperator<T>, HamiltonianError> {
    if !(g_squared > T::zero()) || !g_squared.is_finite() {
        return Err(HamiltonianError::NonPositiveCoupling(g_squared.as_f64()));
    }
    let shifts = plaquette_shifts(&basis);
    let n_p = T::of_usize(shifts.len());
    let two = T::of(2.0);
    let half_g2 = g_squared / two;
    let constant = -two * n_p / g_squared;
    let hop = T::one() / g_squared;
    let dim = basis.dim();
    let mut b = CsrBuilder::with_capacity(dim, dim, dim * (1 + 2 * shifts.len()));
    let mut state = vec![0; basis.n_links()];
    for row in 0..dim {
        let code = basis.code(row);
        basis.decode_into(code, &mut state);
        let e2: i64 = state.iter().map(|&e| (e as i64) * (e as i64)).sum();
        b.push(row, half_g2 * T::of(e2 as f64) + constant);
        for shift in &shifts {
            for sign in [1, -1] {
                if let Some(col) = shifted(&basis, code, &state, shift, sign) {
                    b.push(col, hop);
                }
            }
        }
        b.finish_row();
    }
    Ok(HamiltonianOperator {
        basis,
        g_squared,
        matrix: b.finish(),
    })
}

impl<T: Real + Entry<Real = T>> HamiltonianOperator<T> {
    pub fn basis(&self) -> &GaugeBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<GaugeBasis> {
        &self.basis
    }

    pub fn g_squared(&self) -> T {
        self.g_squared
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `‖H − H†‖_max`.
    pub fn max_asymmetry(&self) -> T {
        self.matrix.max_asymmetry()
    }

    /// `max_x ‖[H, G_x]‖_max`, computed with explicit sparse generators.
    pub fn gauss_commutator_deviation(&self) -> T {
        self.basis
            .geometry()
            .sites()
            .map(|x| CsrMatrix::commutator_deviation(&self.matrix, &gauss_generator(&self.basis, x), None))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// The operator restricted to states with the given site charges; the
    /// Krylov space of an eigensolver then never leaves that sector.
    pub fn restricted_to_charges(&self, charges: &[i32]) -> Result<ChargeRestricted<'_, T>, HamiltonianError> {
        let volume = self.basis.geometry().volume();
        if charges.len() != volume {
            return Err(HamiltonianError::ChargeCount {
                expected: volume,
                got: charges.len(),
            });
        }
        Ok(ChargeRestricted {
            h: self,
            support: self.basis.states_with_charges(charges),
        })
    }
}

impl<T: Real + Entry<Real = T>> SymmetricOperator<T> for HamiltonianOperator<T> {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.matrix.matvec(x, y)
    }
}

/// `P H P` with `P` the projector onto one charge sector of the basis.
pub struct ChargeRestricted<'a, T> {
    h: &'a HamiltonianOperator<T>,
    support: Vec<usize>,
}

impl<T> ChargeRestricted<'_, T> {
    pub fn sector_dim(&self) -> usize {
        self.support.len()
    }
}

impl<T: Real + Entry<Real = T>> SymmetricOperator<T> for ChargeRestricted<'_, T> {
    fn dim(&self) -> usize {
        self.h.matrix.nrows()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.h.matrix.matvec_rows(&self.support, x, y)
    }

    fn support(&self) -> Option<&[usize]> {
        Some(&self.support)
    }
}

/// Lowest `k` eigenpairs with residual `‖Hv − λv‖ ≤ 1e−8 ‖H‖` guaranteed
/// (the solver targets a tighter tolerance).
pub fn ground_state<T: Real, A: SymmetricOperator<T> + ?Sized>(op: &A, k: usize) -> Result<EigenPairs<T>, HamiltonianError> {
    let opts = EigenOptions {
        k,
        ..EigenOptions::default()
    };
    let pairs = lowest_eigenpairs(op, &opts)?;
    let worst = pairs.max_relative_residual();
    if worst > T::of(1e-8) {
        return Err(HamiltonianError::Eigen(crate::eigen::EigenError::NoConvergence {
            restarts: opts.max_restarts,
            worst_residual: worst.as_f64(),
        }));
    }
    Ok(pairs)
}

/// Spectrum as CSV `index,eigenvalue`.
pub fn write_spectrum_csv<T: Real, W: Write>(values: &[T], mut w: W) -> io::Result<()> {
    writeln!(w, "index,eigenvalue")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{},{:.16e}", i, v.as_f64())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_basis, Sector, DEFAULT_BUDGET};
    use crate::lattice::LatticeGeometry;

    fn basis(l: u32, sector: Sector) -> Arc<GaugeBasis> {
        let geo = LatticeGeometry::new(&[2, 2]).unwrap();
        Arc::new(build_basis(&geo, l, sector, DEFAULT_BUDGET).unwrap())
    }

    #[test]
    fn electric_and_link_commute_to_link() {
        let b = basis(2, Sector::Full);
        for l in 0..b.n_links() {
            let e = electric_operator::<f64>(&b, l);
            let u = link_raising_operator::<f64>(&b, l);
            assert_eq!(CsrMatrix::commutator_deviation(&e, &u, Some(&u)), 0.0);
        }
    }

    #[test]
    fn link_operator_clips_at_cutoff() {
        let b = basis(2, Sector::Full);
        let u = link_raising_operator::<f64>(&b, 3);
        let mut s = vec![0; 8];
        s[3] = 1;
        let mut x = vec![0.0; b.dim()];
        x[b.index_of(&s).unwrap()] = 1.0;
        let y = u.mul_vec(&u.mul_vec(&x));
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gauss_generators_sum_to_zero() {
        let b = basis(1, Sector::Full);
        let mut total = CsrMatrix::<f64>::zeros(b.dim(), b.dim());
        for x in b.geometry().sites() {
            total = total.add_scaled(1.0, &gauss_generator(&b, x), 1.0);
        }
        assert_eq!(total.max_abs(), 0.0);
    }

    #[test]
    fn strong_coupling_ground_state_is_electric_vacuum() {
        let b = basis(1, Sector::zero_charge(&LatticeGeometry::new(&[2, 2]).unwrap()));
        let g2 = 1e4_f64;
        let h = build_hamiltonian(b.clone(), g2).unwrap();
        let pairs = ground_state(&h, 1).unwrap();
        let constant = -2.0 * 4.0 / g2;
        assert!((pairs.values[0] - constant).abs() < 1e-6);
        let vac = b.index_of(&[0; 8]).unwrap();
        assert!(pairs.vectors[0][vac].abs() > 0.999);
    }

    #[test]
    fn gap_is_positive_at_unit_coupling() {
        let b = basis(1, Sector::zero_charge(&LatticeGeometry::new(&[2, 2]).unwrap()));
        let h = build_hamiltonian(b, 1.0).unwrap();
        let pairs = ground_state(&h, 2).unwrap();
        assert!(pairs.gap().unwrap() > 1e-3);
    }

    #[test]
    fn rejects_non_positive_coupling() {
        let b = basis(1, Sector::Full);
        assert!(matches!(
            build_hamiltonian(b, 0.0_f64),
            Err(HamiltonianError::NonPositiveCoupling(_))
        ));
    }
}
