use num_complex::Complex;

use crate::scalar::Real;
use crate::sparse::CsrMatrix;

use super::dense::{LuDecomposition, DENSE_BUDGET};
use super::FermionError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Required `‖b − A x‖ / ‖b‖` of the returned solution.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Factorize densely when the Krylov solve misses the tolerance.
    pub dense_fallback: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
            dense_fallback: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    BiCgStab,
    DenseLu,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub x: Vec<Complex<T>>,
    /// True relative residual `‖b − A x‖ / ‖b‖`.
    pub residual: T,
    pub iterations: usize,
    pub method: SolveMethod,
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| s + x.conj() * y)
}

fn norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn true_residual<T: Real>(a: &CsrMatrix<Complex<T>>, x: &[Complex<T>], b: &[Complex<T>]) -> T {
    let ax = a.mul_vec(x);
    let r: Vec<_> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    norm(&r) / norm(b).max(T::min_positive_value())
}

/// Unpreconditioned BiCGStab from a zero initial guess. Returns the iterate
/// and its true relative residual whether or not the tolerance was met.
pub fn bicgstab<T: Real>(
    a: &CsrMatrix<Complex<T>>,
    b: &[Complex<T>],
    tolerance: T,
    max_iterations: usize,
) -> Solution<T> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let bnorm = norm(b);
    let mut x = vec![zero; n];
    if bnorm == T::zero() {
        return Solution {
            x,
            residual: T::zero(),
            iterations: 0,
            method: SolveMethod::BiCgStab,
        };
    }
    let mut r = b.to_vec();
    let r0 = r.clone();
    let mut p = vec![zero; n];
    let mut v = vec![zero; n];
    let mut s = vec![zero; n];
    let mut t = vec![zero; n];
    let (mut rho, mut alpha, mut omega) = (one, one, one);
    // iterate to a tighter recurrence residual; the true residual is checked after
    let target = tolerance * T::of(0.1) * bnorm;
    let mut it = 0;
    while it < max_iterations {
        it += 1;
        let rho_new = dot(&r0, &r);
        if rho_new.norm() < T::min_positive_value() || omega.norm() < T::min_positive_value() {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        a.matvec(&p, &mut v);
        let r0v = dot(&r0, &v);
        if r0v.norm() < T::min_positive_value() {
            break;
        }
        alpha = rho / r0v;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) <= target {
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            break;
        }
        a.matvec(&s, &mut t);
        let tt = dot(&t, &t);
        if tt.norm() < T::min_positive_value() {
            break;
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm(&r) <= target {
            break;
        }
    }
    let residual = true_residual(a, &x, b);
    Solution {
        x,
        residual,
        iterations: it,
        method: SolveMethod::BiCgStab,
    }
}

/// Solves `A x = e_source`. BiCGStab first; if its true residual misses the
/// tolerance and the dimension fits the dense budget, dense LU.
pub fn propagator<T: Real>(
    a: &CsrMatrix<Complex<T>>,
    source: usize,
    opts: &SolveOptions,
) -> Result<Solution<T>, FermionError> {
    let n = a.nrows();
    if source >= n {
        return Err(FermionError::SourceOutOfRange { index: source, dim: n });
    }
    let mut b = vec![Complex::new(T::zero(), T::zero()); n];
    b[source] = Complex::new(T::one(), T::zero());
    let tol = T::tolerance(opts.tolerance);
    let krylov = bicgstab(a, &b, tol, opts.max_iterations);
    if krylov.residual <= tol && krylov.residual.is_finite() {
        return Ok(krylov);
    }
    if !opts.dense_fallback || n > DENSE_BUDGET {
        return Err(FermionError::NoConvergence {
            iterations: krylov.iterations,
            residual: krylov.residual.as_f64(),
        });
    }
    let lu = LuDecomposition::from_sparse(a)?;
    let x = lu.solve(&b)?;
    let residual = true_residual(a, &x, &b);
    if residual > tol {
        return Err(FermionError::Singular {
            condition_estimate: lu.condition_estimate().as_f64(),
        });
    }
    Ok(Solution {
        x,
        residual,
        iterations: krylov.iterations,
        method: SolveMethod::DenseLu,
    })
}
