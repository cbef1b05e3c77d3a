//! Gauge groups U(1), SU(2) and SU(3) in the fundamental representation.
//!
//! A [`GroupElement`] is a unitary color matrix tagged with its group. The
//! Lie algebra is parametrized by real coefficients of the Hermitian
//! generators `T^a`, normalized as `Tr(T^a T^b) = δ^{ab}/2` for SU(N) and
//! `T = 1` for U(1), so that `exp_map(v) = exp(i Σ v_a T^a)`.

mod hermitian;
mod matrix;

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hermitian::{hermitian_eigen, hermitian_function};
pub use matrix::{ColorMatrix, MAX_COLORS};

use crate::rng::{gaussian, symmetric, uniform};
use crate::scalar::{cplx, czero, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    U1,
    SU2,
    SU3,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 3] = [GroupLabel::U1, GroupLabel::SU2, GroupLabel::SU3];

    /// Matrix dimension N.
    #[inline]
    pub fn n(self) -> usize {
        match self {
            GroupLabel::U1 => 1,
            GroupLabel::SU2 => 2,
            GroupLabel::SU3 => 3,
        }
    }

    /// Number of algebra generators (N² − 1, or 1 for U(1)).
    #[inline]
    pub fn algebra_dim(self) -> usize {
        match self {
            GroupLabel::U1 => 1,
            GroupLabel::SU2 => 3,
            GroupLabel::SU3 => 8,
        }
    }

    #[inline]
    pub fn is_special(self) -> bool {
        !matches!(self, GroupLabel::U1)
    }

    pub fn from_n(n: usize) -> Option<Self> {
        match n {
            1 => Some(GroupLabel::U1),
            2 => Some(GroupLabel::SU2),
            3 => Some(GroupLabel::SU3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupLabel::U1 => "u1",
            GroupLabel::SU2 => "su2",
            GroupLabel::SU3 => "su3",
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupLabel::U1 => "U(1)",
            GroupLabel::SU2 => "SU(2)",
            GroupLabel::SU3 => "SU(3)",
        })
    }
}

impl FromStr for GroupLabel {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['(', ')'], "").as_str() {
            "u1" => Ok(GroupLabel::U1),
            "su2" => Ok(GroupLabel::SU2),
            "su3" => Ok(GroupLabel::SU3),
            _ => Err(GroupError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: GroupLabel, right: GroupLabel },
    #[error("matrix dimension {got} does not match {group}")]
    DimensionMismatch { group: GroupLabel, got: usize },
    #[error("{group} algebra element needs {expected} coefficients, got {got}")]
    CoefficientCount {
        group: GroupLabel,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not unitary (‖U†U − I‖ = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("determinant deviates from 1 by {defect:e}")]
    NotSpecial { defect: f64 },
    #[error("matrix too far from unitary to re-project (‖U†U − I‖ = {defect:e}); configuration is corrupted")]
    TooFarFromUnitary { defect: f64 },
    #[error("unknown gauge group '{0}' (expected u1, su2 or su3)")]
    UnknownGroup(String),
}

/// Hermitian generators `T^a`: 1 for U(1), Pauli/2 for SU(2), Gell-Mann/2 for SU(3).
pub fn generators<T: Real>(group: GroupLabel) -> Vec<ColorMatrix<T>> {
    let z = T::zero();
    let h = T::of(0.5);
    let c = |re: T, im: T| Complex::new(re, im);
    let mk = |n: usize, entries: &[(usize, usize, Complex<T>)]| {
        let mut m = ColorMatrix::zeros(n);
        for &(i, j, v) in entries {
            m[(i, j)] = v;
        }
        m
    };
    match group {
        GroupLabel::U1 => vec![ColorMatrix::identity(1)],
        GroupLabel::SU2 => vec![
            mk(2, &[(0, 1, c(h, z)), (1, 0, c(h, z))]),
            mk(2, &[(0, 1, c(z, -h)), (1, 0, c(z, h))]),
            mk(2, &[(0, 0, c(h, z)), (1, 1, c(-h, z))]),
        ],
        GroupLabel::SU3 => {
            let r3 = T::one() / (T::of(2.0) * T::of(3.0).sqrt());
            vec![
                mk(3, &[(0, 1, c(h, z)), (1, 0, c(h, z))]),
                mk(3, &[(0, 1, c(z, -h)), (1, 0, c(z, h))]),
                mk(3, &[(0, 0, c(h, z)), (1, 1, c(-h, z))]),
                mk(3, &[(0, 2, c(h, z)), (2, 0, c(h, z))]),
                mk(3, &[(0, 2, c(z, -h)), (2, 0, c(z, h))]),
                mk(3, &[(1, 2, c(h, z)), (2, 1, c(h, z))]),
                mk(3, &[(1, 2, c(z, -h)), (2, 1, c(z, h))]),
                mk(
                    3,
                    &[
                        (0, 0, c(r3, z)),
                        (1, 1, c(r3, z)),
                        (2, 2, c(-T::of(2.0) * r3, z)),
                    ],
                ),
            ]
        }
    }
}

/// Real coefficients `v_a` of the algebra element `Σ v_a T^a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    group: GroupLabel,
    coeffs: [T; 8],
}

impl<T: Real> AlgebraElement<T> {
    pub fn new(group: GroupLabel, coefficients: &[T]) -> Result<Self, GroupError> {
        if coefficients.len() != group.algebra_dim() {
            return Err(GroupError::CoefficientCount {
                group,
                expected: group.algebra_dim(),
                got: coefficients.len(),
            });
        }
        let mut coeffs = [T::zero(); 8];
        coeffs[..coefficients.len()].copy_from_slice(coefficients);
        Ok(Self { group, coeffs })
    }

    pub fn zero(group: GroupLabel) -> Self {
        Self {
            group,
            coeffs: [T::zero(); 8],
        }
    }

    /// Uniform random element with every coefficient in `[-scale, scale)`.
    pub fn random_uniform<R: Rng + ?Sized>(group: GroupLabel, scale: T, rng: &mut R) -> Self {
        let mut coeffs = [T::zero(); 8];
        for c in coeffs.iter_mut().take(group.algebra_dim()) {
            *c = symmetric::<T, _>(rng) * scale;
        }
        Self { group, coeffs }
    }

    #[inline]
    pub fn group(&self) -> GroupLabel {
        self.group
    }

    #[inline]
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs[..self.group.algebra_dim()]
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn norm(&self) -> T {
        self.coefficients().iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    /// The Hermitian matrix `Σ v_a T^a`.
    pub fn hermitian_matrix(&self) -> ColorMatrix<T> {
        let n = self.group.n();
        generators::<T>(self.group)
            .iter()
            .zip(self.coefficients())
            .fold(ColorMatrix::zeros(n), |acc, (t, &v)| acc + t.scale(v))
    }

    /// Matrix exponential `exp(i Σ v_a T^a)`.
    pub fn exp(&self) -> GroupElement<T> {
        exp_map(self)
    }
}

impl<T: Real> std::ops::Neg for AlgebraElement<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

/// Unitary color matrix tagged with its gauge group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement<T> {
    group: GroupLabel,
    mat: ColorMatrix<T>,
}

impl<T: Real> GroupElement<T> {
    pub fn identity(group: GroupLabel) -> Self {
        Self {
            group,
            mat: ColorMatrix::identity(group.n()),
        }
    }

    /// Wraps a matrix after checking dimension, unitarity and (for SU(N))
    /// the determinant, both to within `tol`.
    pub fn from_matrix(group: GroupLabel, mat: ColorMatrix<T>, tol: T) -> Result<Self, GroupError> {
        if mat.dim() != group.n() {
            return Err(GroupError::DimensionMismatch {
                group,
                got: mat.dim(),
            });
        }
        let defect = mat.unitarity_defect();
        if !(defect <= tol) {
            return Err(GroupError::NotUnitary {
                defect: defect.as_f64(),
            });
        }
        if group.is_special() {
            let d = (mat.determinant() - Complex::new(T::one(), T::zero())).norm();
            if !(d <= tol) {
                return Err(GroupError::NotSpecial { defect: d.as_f64() });
            }
        }
        Ok(Self { group, mat })
    }

    /// Wraps a matrix without validation. The caller guarantees the invariants.
    #[inline]
    pub fn from_matrix_unchecked(group: GroupLabel, mat: ColorMatrix<T>) -> Self {
        debug_assert_eq!(mat.dim(), group.n());
        Self { group, mat }
    }

    /// U(1) element `e^{iθ}`.
    pub fn u1_phase(theta: T) -> Self {
        Self {
            group: GroupLabel::U1,
            mat: ColorMatrix::diagonal(&[Complex::from_polar(T::one(), theta)]),
        }
    }

    #[inline]
    pub fn group(&self) -> GroupLabel {
        self.group
    }

    #[inline]
    pub fn matrix(&self) -> &ColorMatrix<T> {
        &self.mat
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch {
                left: self.group,
                right: other.group,
            });
        }
        Ok(Self {
            group: self.group,
            mat: self.mat * other.mat,
        })
    }

    /// `self · other†`.
    #[inline]
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group, "group mismatch");
        Self {
            group: self.group,
            mat: self.mat.mul_adjoint(&other.mat),
        }
    }

    /// `self† · other`.
    #[inline]
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group, "group mismatch");
        Self {
            group: self.group,
            mat: self.mat.adjoint_mul(&other.mat),
        }
    }

    #[inline]
    pub fn adjoint(&self) -> Self {
        Self {
            group: self.group,
            mat: self.mat.adjoint(),
        }
    }

    #[inline]
    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    /// `(1/N) Re Tr U`, in `[-1, 1]`.
    #[inline]
    pub fn trace_real_normalized(&self) -> T {
        self.mat.trace().re / T::of_usize(self.group.n())
    }

    /// `V U V†`.
    pub fn conjugate_by(&self, v: &Self) -> Self {
        (*v * *self).mul_adjoint(v)
    }

    pub fn unitarity_defect(&self) -> T {
        self.mat.unitarity_defect()
    }

    /// `|det U − 1|` for SU(N); zero for U(1).
    pub fn determinant_defect(&self) -> T {
        if self.group.is_special() {
            (self.mat.determinant() - Complex::new(T::one(), T::zero())).norm()
        } else {
            T::zero()
        }
    }

    /// Projects back onto the group: polar decomposition `A (A†A)^{-1/2}`
    /// followed by division by an N-th root of the determinant for SU(N).
    pub fn reunitarize(&self) -> Result<Self, GroupError> {
        let defect = self.mat.unitarity_defect();
        if !(defect < T::of(0.1)) {
            return Err(GroupError::TooFarFromUnitary {
                defect: defect.as_f64(),
            });
        }
        Ok(Self {
            group: self.group,
            mat: project_to_unitary(&self.mat, self.group.is_special()),
        })
    }

    pub fn haar_sample<R: Rng + ?Sized>(group: GroupLabel, rng: &mut R) -> Self {
        haar_sample(group, rng)
    }

    /// Converts to another scalar width.
    pub fn convert<B: Real>(&self) -> GroupElement<B> {
        let n = self.group.n();
        let mut m = ColorMatrix::<B>::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = crate::scalar::convert_complex(self.mat[(i, j)]);
            }
        }
        GroupElement {
            group: self.group,
            mat: m,
        }
    }
}

impl<T: Real> Mul for GroupElement<T> {
    type Output = Self;

    /// Panics on group mismatch; use [`GroupElement::multiply`] for a fallible product.
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        Self {
            group: self.group,
            mat: self.mat * rhs.mat,
        }
    }
}

/// Polar projection of a full-rank matrix onto U(N), optionally fixing
/// the determinant to one.
pub fn project_to_unitary<T: Real>(a: &ColorMatrix<T>, special: bool) -> ColorMatrix<T> {
    let n = a.dim();
    let w = if n == 1 {
        let z = a[(0, 0)];
        ColorMatrix::diagonal(&[z / z.norm()])
    } else {
        let gram = a.adjoint_mul(a);
        let inv_sqrt = hermitian_function(&gram, |s| cplx(T::one() / s.sqrt(), T::zero()));
        *a * inv_sqrt
    };
    if special {
        fix_determinant_phase(&w)
    } else {
        w
    }
}

/// Divides a unitary matrix by the principal N-th root of its determinant phase.
pub(crate) fn fix_determinant_phase<T: Real>(w: &ColorMatrix<T>) -> ColorMatrix<T> {
    let n = w.dim();
    let arg = w.determinant().arg();
    w.scale_complex(Complex::from_polar(T::one(), -arg / T::of_usize(n)))
}

/// `exp(i Σ v_a T^a)`.
pub fn exp_map<T: Real>(v: &AlgebraElement<T>) -> GroupElement<T> {
    let group = v.group();
    let mat = match group {
        GroupLabel::U1 => ColorMatrix::diagonal(&[Complex::from_polar(T::one(), v.coefficients()[0])]),
        GroupLabel::SU2 => {
            // (v·σ/2)² = r² I with r = |v|/2, so exp(iH) = cos r + i (sin r / r) H.
            let h = v.hermitian_matrix();
            let r = v.norm() / T::of(2.0);
            let sinc = if r < T::tolerance(1e-8) {
                T::one() - r * r / T::of(6.0)
            } else {
                r.sin() / r
            };
            ColorMatrix::identity(2).scale(r.cos()) + h.scale_complex(cplx(T::zero(), sinc))
        }
        GroupLabel::SU3 => {
            let h = v.hermitian_matrix();
            hermitian_function(&h, |lambda| Complex::from_polar(T::one(), lambda))
        }
    };
    GroupElement { group, mat }
}

/// Draws from the normalized Haar measure.
///
/// U(1): uniform phase. SU(2): uniform point on the unit 3-sphere mapped to
/// `a₀ + i a·σ`. SU(3): Gram–Schmidt of a complex Gaussian matrix (positive
/// diagonal of R, which makes the U(3) sample exactly Haar) followed by
/// division by a cube root of the determinant.
pub fn haar_sample<T: Real, R: Rng + ?Sized>(group: GroupLabel, rng: &mut R) -> GroupElement<T> {
    let mat = match group {
        GroupLabel::U1 => {
            let theta = uniform::<T, _>(rng) * T::TAU();
            ColorMatrix::diagonal(&[Complex::from_polar(T::one(), theta)])
        }
        GroupLabel::SU2 => {
            let mut a = [T::zero(); 4];
            let mut norm2 = T::zero();
            while norm2 < T::tolerance(1e-20) {
                for x in a.iter_mut() {
                    *x = gaussian(rng);
                }
                norm2 = a.iter().map(|&x| x * x).sum();
            }
            let inv = T::one() / norm2.sqrt();
            su2_from_quaternion([a[0] * inv, a[1] * inv, a[2] * inv, a[3] * inv])
        }
        GroupLabel::SU3 => {
            let mut z = ColorMatrix::<T>::zeros(3);
            for i in 0..3 {
                for j in 0..3 {
                    z[(i, j)] = cplx(gaussian(rng), gaussian(rng));
                }
            }
            fix_determinant_phase(&gram_schmidt_columns(&z))
        }
    };
    GroupElement { group, mat }
}

/// Orthonormalizes the columns in order (twice-iterated classical Gram–Schmidt).
pub(crate) fn gram_schmidt_columns<T: Real>(z: &ColorMatrix<T>) -> ColorMatrix<T> {
    let n = z.dim();
    let mut q = *z;
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj: Complex<T> = czero();
                for i in 0..n {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qik = q[(i, k)];
                    q[(i, j)] -= proj * qik;
                }
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<T>().sqrt();
        for i in 0..n {
            q[(i, j)] = q[(i, j)] / norm;
        }
    }
    q
}

/// SU(2) matrix `a₀ I + i (a₁σ₁ + a₂σ₂ + a₃σ₃)` for a unit quaternion.
#[inline]
pub(crate) fn su2_from_quaternion<T: Real>(a: [T; 4]) -> ColorMatrix<T> {
    let mut m = ColorMatrix::zeros(2);
    m[(0, 0)] = cplx(a[0], a[3]);
    m[(0, 1)] = cplx(a[2], a[1]);
    m[(1, 0)] = cplx(-a[2], a[1]);
    m[(1, 1)] = cplx(a[0], -a[3]);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_stream;

    const TOL: f64 = 1e-12;

    #[test]
    fn identity_cases() {
        let id2 = GroupElement::<f64>::identity(GroupLabel::SU2);
        assert_eq!(id2.matrix().row_major(), vec![cplx(1.0, 0.0), czero(), czero(), cplx(1.0, 0.0)]);
        assert_eq!(GroupElement::<f64>::identity(GroupLabel::SU3).trace(), cplx(3.0, 0.0));
        assert_eq!(GroupElement::<f64>::identity(GroupLabel::U1).matrix().row_major(), vec![cplx(1.0, 0.0)]);
        for g in GroupLabel::ALL {
            let id = GroupElement::<f64>::identity(g);
            assert_eq!(id.unitarity_defect(), 0.0);
            assert_eq!(id.determinant_defect(), 0.0);
        }
    }

    #[test]
    fn multiply_identity_and_inverse() {
        let mut rng = rng_stream(1);
        for g in GroupLabel::ALL {
            let u = haar_sample::<f64, _>(g, &mut rng);
            let id = GroupElement::identity(g);
            assert!(u.multiply(&id).unwrap().matrix().max_abs_diff(u.matrix()) < TOL);
            assert!(u.multiply(&u.adjoint()).unwrap().matrix().max_abs_diff(id.matrix()) < TOL);
        }
    }

    #[test]
    fn multiply_rejects_group_mismatch() {
        let a = GroupElement::<f64>::identity(GroupLabel::SU2);
        let b = GroupElement::<f64>::identity(GroupLabel::SU3);
        assert_eq!(
            a.multiply(&b),
            Err(GroupError::GroupMismatch {
                left: GroupLabel::SU2,
                right: GroupLabel::SU3
            })
        );
    }

    #[test]
    fn adjoint_cases() {
        let id = GroupElement::<f64>::identity(GroupLabel::SU2);
        assert_eq!(id.adjoint(), id);
        let d = GroupElement::from_matrix(
            GroupLabel::SU2,
            ColorMatrix::diagonal(&[cplx(0.0, 1.0), cplx(0.0, -1.0)]),
            TOL,
        )
        .unwrap();
        assert_eq!(
            d.adjoint().matrix().row_major(),
            vec![cplx(0.0, -1.0), czero(), czero(), cplx(0.0, 1.0)]
        );
        let mut rng = rng_stream(2);
        for g in GroupLabel::ALL {
            let u = haar_sample::<f64, _>(g, &mut rng);
            assert_eq!(u.adjoint().adjoint(), u);
        }
    }

    #[test]
    fn exp_map_simple_values() {
        for g in GroupLabel::ALL {
            let e = exp_map(&AlgebraElement::<f64>::zero(g));
            assert!(e.matrix().max_abs_diff(GroupElement::identity(g).matrix()) < TOL);
        }
        let u = exp_map(&AlgebraElement::new(GroupLabel::U1, &[std::f64::consts::PI]).unwrap());
        assert!((u.matrix()[(0, 0)] - cplx(-1.0, 0.0)).norm() < TOL);
        let s = exp_map(&AlgebraElement::new(GroupLabel::SU2, &[std::f64::consts::PI, 0.0, 0.0]).unwrap());
        assert!(s.trace().norm() < TOL);
        assert!(s.trace_real_normalized().abs() < TOL);
    }

    #[test]
    fn trace_real_normalized_cases() {
        assert_eq!(GroupElement::<f64>::identity(GroupLabel::SU3).trace_real_normalized(), 1.0);
        assert_eq!(GroupElement::<f64>::u1_phase(std::f64::consts::PI).trace_real_normalized(), -1.0);
    }

    #[test]
    fn generator_normalization() {
        assert_eq!(generators::<f64>(GroupLabel::SU2).len(), 3);
        for g in [GroupLabel::SU2, GroupLabel::SU3] {
            let ts = generators::<f64>(g);
            assert_eq!(ts.len(), g.algebra_dim());
            for (a, ta) in ts.iter().enumerate() {
                assert!(ta.is_hermitian(0.0));
                assert!(ta.trace().norm() < 1e-15);
                for (b, tb) in ts.iter().enumerate() {
                    let tr = (*ta * *tb).trace();
                    let expect = if a == b { 0.5 } else { 0.0 };
                    assert!((tr - cplx(expect, 0.0)).norm() < 1e-15, "Tr(T{a}T{b}) = {tr}");
                }
            }
        }
        let su3 = generators::<f64>(GroupLabel::SU3);
        assert_eq!((su3[0] * su3[1]).trace().re, 0.0);
    }

    #[test]
    fn reunitarize_rejects_corrupted_input() {
        let bad = GroupElement::from_matrix_unchecked(
            GroupLabel::SU2,
            ColorMatrix::<f64>::identity(2).scale(1.2),
        );
        assert!(matches!(bad.reunitarize(), Err(GroupError::TooFarFromUnitary { .. })));
    }

    #[test]
    fn reunitarize_identity_is_identity() {
        for g in GroupLabel::ALL {
            let id = GroupElement::<f64>::identity(g);
            assert!(id.reunitarize().unwrap().matrix().max_abs_diff(id.matrix()) < TOL);
        }
    }

    #[test]
    fn group_label_parsing() {
        assert_eq!("SU(3)".parse::<GroupLabel>().unwrap(), GroupLabel::SU3);
        assert_eq!("u1".parse::<GroupLabel>().unwrap(), GroupLabel::U1);
        assert!("so3".parse::<GroupLabel>().is_err());
        assert_eq!(GroupLabel::from_n(2), Some(GroupLabel::SU2));
        assert_eq!(GroupLabel::from_n(4), None);
    }

    #[test]
    fn single_precision_is_supported() {
        let mut rng = rng_stream(3);
        let u = haar_sample::<f32, _>(GroupLabel::SU3, &mut rng);
        assert!(u.unitarity_defect() < f32::tolerance(1e-12) * 10.0);
        let v = exp_map(&AlgebraElement::<f32>::new(GroupLabel::SU2, &[0.3, -0.2, 0.9]).unwrap());
        assert!(v.unitarity_defect() < 1e-5);
    }
}
