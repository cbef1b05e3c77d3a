//! Fixed-capacity complex matrices of dimension 1, 2 or 3.
//!
//! Link variables, staples and condensates all live in color space, whose
//! dimension never exceeds three. Storing them inline keeps a gauge field a
//! flat `Vec` without per-link heap allocations.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cone, czero, Real};

/// Largest supported color dimension.
pub const MAX_COLORS: usize = 3;

/// An `n × n` complex matrix with `n ≤ 3`. Entries outside the active block
/// are kept at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorMatrix<T> {
    n: usize,
    e: [[Complex<T>; MAX_COLORS]; MAX_COLORS],
}

impl<T: Real> ColorMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        assert!(
            (1..=MAX_COLORS).contains(&n),
            "color dimension {n} outside 1..=3"
        );
        Self {
            n,
            e: [[czero(); MAX_COLORS]; MAX_COLORS],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i][i] = cone();
        }
        m
    }

    /// Builds a matrix from `n*n` entries in row-major order.
    pub fn from_row_major(n: usize, entries: &[Complex<T>]) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.e[i][j] = entries[i * n + j];
            }
        }
        m
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.e[i][i] = z;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entries of the active block in row-major order.
    pub fn row_major(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            out.extend_from_slice(&self.e[i][..self.n]);
        }
        out
    }

    /// Conjugate transpose.
    #[inline]
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.e[j][i] = self.e[i][j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn trace(&self) -> Complex<T> {
        let mut t = czero();
        for i in 0..self.n {
            t += self.e[i][i];
        }
        t
    }

    /// `Re Tr(self · other†)` without forming the product.
    #[inline]
    pub fn re_trace_mul_adjoint(&self, other: &Self) -> T {
        debug_assert_eq!(self.n, other.n);
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.e[i][j];
                let b = other.e[i][j];
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc
    }

    /// `self · other†`.
    #[inline]
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = czero();
                for k in 0..n {
                    acc += self.e[i][k] * other.e[j][k].conj();
                }
                m.e[i][j] = acc;
            }
        }
        m
    }

    /// `self† · other`.
    #[inline]
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = czero();
                for k in 0..n {
                    acc += self.e[k][i].conj() * other.e[k][j];
                }
                m.e[i][j] = acc;
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.e[i][j] = m.e[i][j] * s;
            }
        }
        m
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.e[i][j] = m.e[i][j] * s;
            }
        }
        m
    }

    pub fn determinant(&self) -> Complex<T> {
        let e = &self.e;
        match self.n {
            1 => e[0][0],
            2 => e[0][0] * e[1][1] - e[0][1] * e[1][0],
            _ => {
                e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
                    - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
                    + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        let mut best = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                best = best.max(self.e[i][j].norm());
            }
        }
        best
    }

    /// Largest entry-wise difference modulus.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.e[i][j].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A†A − I‖_max`.
    pub fn unitarity_defect(&self) -> T {
        self.adjoint_mul(self).max_abs_diff(&Self::identity(self.n))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Outer product `u ⊗ v` with entries `u_a v_b`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of mismatched vectors");
        let mut m = Self::zeros(u.len());
        for (a, &ua) in u.iter().enumerate() {
            for (b, &vb) in v.iter().enumerate() {
                m.e[a][b] = ua * vb;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.e[i][j] * v[j]).sum())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for ColorMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.e[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for ColorMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.e[i][j]
    }
}

impl<T: Real> Mul for ColorMatrix<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i][k];
                for j in 0..n {
                    m.e[i][j] += a * rhs.e[k][j];
                }
            }
        }
        m
    }
}

impl<T: Real> Add for ColorMatrix<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for ColorMatrix<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.n, rhs.n);
        for i in 0..self.n {
            for j in 0..self.n {
                self.e[i][j] += rhs.e[i][j];
            }
        }
    }
}

impl<T: Real> Sub for ColorMatrix<T> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        for i in 0..self.n {
            for j in 0..self.n {
                self.e[i][j] -= rhs.e[i][j];
            }
        }
        self
    }
}

impl<T: Real> Neg for ColorMatrix<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}
