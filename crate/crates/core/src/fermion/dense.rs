use num_complex::Complex;

use crate::scalar::Real;
use crate::sparse::CsrMatrix;

use super::FermionError;

/// Largest dimension handled by dense factorizations.
pub const DENSE_BUDGET: usize = 4096;

/// `det A = exp(log_abs) · phase`, kept apart so large operators do not overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Determinant<T> {
    pub log_abs: T,
    /// Unit-modulus phase factor.
    pub phase: Complex<T>,
}

impl<T: Real> Determinant<T> {
    pub fn value(&self) -> Complex<T> {
        self.phase * self.log_abs.exp()
    }

    /// Phase angle in `(−π, π]`.
    pub fn arg(&self) -> T {
        self.phase.arg()
    }

    /// `det(A) / det(B)` as a complex number.
    pub fn ratio(&self, other: &Self) -> Complex<T> {
        self.phase / other.phase * (self.log_abs - other.log_abs).exp()
    }
}

/// `P A = L U` with partial pivoting, stored in place (unit lower triangle implied).
#[derive(Clone, Debug)]
pub struct LuDecomposition<T> {
    n: usize,
    lu: Vec<Complex<T>>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> LuDecomposition<T> {
    pub fn new(n: usize, mut a: Vec<Complex<T>>) -> Result<Self, FermionError> {
        assert_eq!(a.len(), n * n, "dense matrix must be n × n");
        if n > DENSE_BUDGET {
            return Err(FermionError::OverBudget {
                dim: n,
                budget: DENSE_BUDGET,
            });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, _) = (k..n).fold((k, T::zero()), |(bi, bv), i| {
                let v = a[i * n + k].norm();
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a[k * n + k];
            if pivot.norm() == T::zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut((k + 1) * n);
            let row_k = &upper[k * n..];
            for row in lower.chunks_exact_mut(n) {
                let f = row[k] / pivot;
                row[k] = f;
                if f.norm() != T::zero() {
                    for j in k + 1..n {
                        row[j] -= f * row_k[j];
                    }
                }
            }
        }
        Ok(Self { n, lu: a, perm, swaps })
    }

    pub fn from_sparse(a: &CsrMatrix<Complex<T>>) -> Result<Self, FermionError> {
        assert_eq!(a.nrows(), a.ncols());
        if a.nrows() > DENSE_BUDGET {
            return Err(FermionError::OverBudget {
                dim: a.nrows(),
                budget: DENSE_BUDGET,
            });
        }
        Self::new(a.nrows(), a.to_dense())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn determinant(&self) -> Determinant<T> {
        let mut log_abs = T::zero();
        let mut phase = Complex::new(T::one(), T::zero());
        if self.swaps % 2 == 1 {
            phase = -phase;
        }
        for k in 0..self.n {
            let d = self.lu[k * self.n + k];
            let r = d.norm();
            if r == T::zero() {
                return Determinant {
                    log_abs: T::neg_infinity(),
                    phase: Complex::new(T::one(), T::zero()),
                };
            }
            log_abs += r.ln();
            phase = phase * (d / r);
        }
        // renormalize accumulated rounding in the phase
        phase = phase / phase.norm();
        Determinant { log_abs, phase }
    }

    /// Ratio of the largest to smallest pivot modulus; infinite if a pivot vanished.
    pub fn condition_estimate(&self) -> T {
        let mut hi = T::zero();
        let mut lo = T::infinity();
        for k in 0..self.n {
            let r = self.lu[k * self.n + k].norm();
            hi = hi.max(r);
            lo = lo.min(r);
        }
        if lo == T::zero() {
            T::infinity()
        } else {
            hi / lo
        }
    }

    pub fn is_singular(&self) -> bool {
        self.condition_estimate() > T::one() / (T::epsilon() * T::of(16.0))
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>, FermionError> {
        let n = self.n;
        assert_eq!(b.len(), n);
        if self.is_singular() {
            return Err(FermionError::Singular {
                condition_estimate: self.condition_estimate().as_f64(),
            });
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let mut s = x[i];
            for (j, l) in row.iter().enumerate() {
                s -= *l * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        Ok(x)
    }
}

/// Determinant of a sparse square matrix via dense LU.
pub fn determinant<T: Real>(a: &CsrMatrix<Complex<T>>) -> Result<Determinant<T>, FermionError> {
    Ok(LuDecomposition::from_sparse(a)?.determinant())
}
