//! Cyclic Jacobi diagonalization of small Hermitian matrices.

use num_complex::Complex;

use super::matrix::ColorMatrix;
use crate::scalar::Real;

/// Eigen-decomposition `A = V diag(λ) V†` of a Hermitian color matrix.
///
/// Eigenvalues are returned in ascending order; columns of `V` are the
/// matching orthonormal eigenvectors.
pub fn hermitian_eigen<T: Real>(a: &ColorMatrix<T>) -> (Vec<T>, ColorMatrix<T>) {
    let n = a.dim();
    let mut a = *a;
    let mut v = ColorMatrix::identity(n);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let eps = T::epsilon();

    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale * T::of(1e-2) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= eps * eps * scale {
                    continue;
                }
                let phase = b / babs;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (T::of(2.0) * babs);
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let mut j = ColorMatrix::identity(n);
                j[(p, p)] = Complex::new(c, T::zero());
                j[(p, q)] = Complex::new(s, T::zero());
                j[(q, p)] = phase.conj() * (-s);
                j[(q, q)] = phase.conj() * c;
                a = j.adjoint() * a * j;
                v = v * j;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| a[(i, i)].re.partial_cmp(&a[(k, k)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = ColorMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs[(row, col)] = v[(row, src)];
        }
    }
    (values, vecs)
}

/// Applies `f` to the eigenvalues of a Hermitian matrix: `V diag(f(λ)) V†`.
pub fn hermitian_function<T: Real>(
    a: &ColorMatrix<T>,
    f: impl Fn(T) -> Complex<T>,
) -> ColorMatrix<T> {
    let (vals, vecs) = hermitian_eigen(a);
    let d: Vec<Complex<T>> = vals.into_iter().map(f).collect();
    vecs * ColorMatrix::diagonal(&d) * vecs.adjoint()
}
