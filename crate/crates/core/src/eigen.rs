//! Symmetric eigensolvers.
//!
//! [`symmetric_eigen`] is a dense Householder tridiagonalization followed by
//! implicit QL iteration. [`lowest_eigenpairs`] is a thick-restart block
//! Lanczos method with full reorthogonalization for large sparse operators;
//! operators may declare a coordinate support, in which case every Krylov
//! vector vanishes outside it.

use num_complex::Complex;
use thiserror::Error;

use crate::rng::{gaussian, rng_stream};
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, Entry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("eigensolver did not converge after {restarts} restarts (worst relative residual {worst_residual:e})")]
    NoConvergence { restarts: usize, worst_residual: f64 },
    #[error("invalid eigensolver options: {0}")]
    InvalidOptions(String),
}

/// Real symmetric linear operator.
pub trait SymmetricOperator<T>: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`.
    fn apply(&self, x: &[T], y: &mut [T]);

    /// Sorted coordinates the operator acts on. Vectors supplied to `apply`
    /// vanish elsewhere and only these entries of `y` are read back.
    fn support(&self) -> Option<&[usize]> {
        None
    }
}

impl<T: Real + Entry<Real = T>> SymmetricOperator<T> for CsrMatrix<T> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.matvec(x, y)
    }
}

/// Dense symmetric matrix (row-major) wrapped as an operator.
pub struct DenseSymmetric<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> SymmetricOperator<T> for DenseSymmetric<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(&a, &b)| a * b).sum();
        }
    }
}

/// Eigen-decomposition of a dense real symmetric matrix (row-major, only
/// the matrix as a whole is read). Returns ascending eigenvalues and the
/// eigenvectors as columns of a row-major `n × n` matrix.
pub fn symmetric_eigen<T: Real>(n: usize, a: &[T]) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), n * n, "matrix is not {n}×{n}");
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut v = a.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![T::zero(); n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs[row * n + col] = v[row * n + src];
        }
    }
    (values, vecs)
}

/// Eigenvalues of a dense Hermitian matrix (row-major), ascending.
///
/// Uses the real symmetric embedding `[[Re A, −Im A], [Im A, Re A]]`, whose
/// spectrum is that of `A` with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Real>(n: usize, a: &[Complex<T>]) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    let m = 2 * n;
    let mut big = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a[i * n + j];
            big[i * m + j] = z.re;
            big[(i + n) * m + j + n] = z.re;
            big[i * m + j + n] = -z.im;
            big[(i + n) * m + j] = z.im;
        }
    }
    let (vals, _) = symmetric_eigen(m, &big);
    vals.into_iter().step_by(2).collect()
}

// Householder reduction to tridiagonal form with accumulated transformations.
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for &dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
                v[at(j, i)] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = T::zero();
    }
    v[at(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

// Implicit QL iteration on the tridiagonal matrix (d, e).
fn tql2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let at = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                assert!(iter < 200, "QL iteration failed to converge");
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::of(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let hk = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * hk;
                        v[at(k, i)] = c * v[at(k, i)] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenOptions {
    /// Number of lowest eigenpairs requested.
    pub k: usize,
    /// Block size; eigenvalues of higher multiplicity are completed by the
    /// multiplicity check.
    pub block: usize,
    /// Largest Krylov basis kept between restarts.
    pub max_basis: usize,
    /// Convergence when every residual is below `tol · ‖A‖`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Problems with at most this many active coordinates are solved densely.
    pub dense_limit: usize,
    /// Re-run with the converged vectors deflated to catch missed degenerate copies.
    pub check_multiplicity: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            k: 6,
            block: 4,
            max_basis: 40,
            tol: 1e-11,
            max_restarts: 2000,
            seed: 0x5eed,
            dense_limit: 400,
            check_multiplicity: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPairs<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Unit eigenvectors in the operator's full coordinates.
    pub vectors: Vec<Vec<T>>,
    /// Explicit residual norms `‖A v − λ v‖`.
    pub residuals: Vec<T>,
    /// Lower bound on `‖A‖` (largest Ritz value magnitude seen).
    pub norm_estimate: T,
    pub matvecs: usize,
}

impl<T: Real> EigenPairs<T> {
    /// `E₁ − E₀`, if at least two eigenvalues were computed.
    pub fn gap(&self) -> Option<T> {
        (self.values.len() >= 2).then(|| self.values[1] - self.values[0])
    }

    /// Largest residual relative to the norm estimate.
    pub fn max_relative_residual(&self) -> T {
        let scale = self.norm_estimate.max(T::min_positive_value());
        self.residuals.iter().fold(T::zero(), |a, &r| a.max(r / scale))
    }
}

#[inline]
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// The operator seen in compressed coordinates (its support only).
struct Compressed<'a, T, A: ?Sized> {
    op: &'a A,
    support: Option<Vec<usize>>,
    xfull: Vec<T>,
    yfull: Vec<T>,
    locked: Vec<Vec<T>>,
    matvecs: usize,
}

impl<'a, T: Real, A: SymmetricOperator<T> + ?Sized> Compressed<'a, T, A> {
    fn new(op: &'a A) -> Self {
        let support = op.support().map(|s| s.to_vec());
        let (xfull, yfull) = if support.is_some() {
            (vec![T::zero(); op.dim()], vec![T::zero(); op.dim()])
        } else {
            (Vec::new(), Vec::new())
        };
        Self {
            op,
            support,
            xfull,
            yfull,
            locked: Vec::new(),
            matvecs: 0,
        }
    }

    fn n(&self) -> usize {
        self.support.as_ref().map_or(self.op.dim(), |s| s.len())
    }

    fn apply(&mut self, x: &[T], y: &mut [T]) {
        self.matvecs += 1;
        match &self.support {
            None => self.op.apply(x, y),
            Some(s) => {
                for (&i, &xi) in s.iter().zip(x) {
                    self.xfull[i] = xi;
                }
                self.op.apply(&self.xfull, &mut self.yfull);
                for (&i, yi) in s.iter().zip(y.iter_mut()) {
                    *yi = self.yfull[i];
                }
            }
        }
        // Locked directions are projected out on both sides.
        for l in &self.locked {
            let c = dot(l, y);
            axpy(-c, l, y);
        }
    }

    fn expand(&self, x: &[T]) -> Vec<T> {
        match &self.support {
            None => x.to_vec(),
            Some(s) => {
                let mut full = vec![T::zero(); self.op.dim()];
                for (&i, &xi) in s.iter().zip(x) {
                    full[i] = xi;
                }
                full
            }
        }
    }

    fn project_locked(&self, x: &mut [T]) {
        for l in &self.locked {
            let c = dot(l, x);
            axpy(-c, l, x);
        }
    }
}

/// Orthogonalizes `w` against `basis` and the locked vectors (two passes).
fn orthogonalize<T: Real>(w: &mut [T], basis: &[Vec<T>], extra: &[Vec<T>]) {
    for _ in 0..2 {
        for b in basis.iter().chain(extra) {
            let c = dot(b, w);
            axpy(-c, b, w);
        }
    }
}

/// Lowest `opts.k` eigenpairs of a real symmetric operator.
///
/// Returns fewer pairs only when the active space itself is smaller than `k`.
pub fn lowest_eigenpairs<T: Real, A: SymmetricOperator<T> + ?Sized>(
    op: &A,
    opts: &EigenOptions,
) -> Result<EigenPairs<T>, EigenError> {
    if opts.k == 0 || opts.block == 0 {
        return Err(EigenError::InvalidOptions("k and block must be positive".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(EigenError::InvalidOptions("tolerance must be positive".into()));
    }
    let mut comp = Compressed::new(op);
    let n = comp.n();
    let k = opts.k.min(n);
    if k == 0 {
        return Ok(EigenPairs {
            values: Vec::new(),
            vectors: Vec::new(),
            residuals: Vec::new(),
            norm_estimate: T::zero(),
            matvecs: 0,
        });
    }
    let (values, vectors, norm) = if n <= opts.dense_limit {
        dense_path(&mut comp, k)
    } else {
        let (mut vals, mut vecs, mut norm) = block_lanczos(&mut comp, k, opts, opts.seed)?;
        if opts.check_multiplicity {
            let mut round = 0u64;
            loop {
                round += 1;
                comp.locked = vecs.clone();
                let extra = opts.block.min(n.saturating_sub(vecs.len()));
                if extra == 0 {
                    break;
                }
                let probe_opts = EigenOptions { k: extra, ..opts.clone() };
                let (pv, pvec, pn) = block_lanczos(&mut comp, extra, &probe_opts, opts.seed ^ round.wrapping_mul(0x9e37_79b9))?;
                norm = norm.max(pn);
                let threshold = *vals.last().expect("k ≥ 1") - T::of(opts.tol * 100.0) * norm;
                let lower: Vec<usize> = (0..pv.len()).filter(|&i| pv[i] < threshold).collect();
                if lower.is_empty() {
                    break;
                }
                for i in lower {
                    vals.push(pv[i]);
                    vecs.push(pvec[i].clone());
                }
                let mut order: Vec<usize> = (0..vals.len()).collect();
                order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).expect("finite"));
                order.truncate(k);
                vals = order.iter().map(|&i| vals[i]).collect();
                vecs = order.iter().map(|&i| vecs[i].clone()).collect();
            }
            comp.locked.clear();
        }
        (vals, vecs, norm)
    };

    // Explicit residuals in compressed coordinates.
    let mut residuals = Vec::with_capacity(values.len());
    let mut av = vec![T::zero(); n];
    for (lambda, v) in values.iter().zip(&vectors) {
        comp.apply(v, &mut av);
        axpy(-*lambda, v, &mut av);
        residuals.push(dot(&av, &av).sqrt());
    }
    let matvecs = comp.matvecs;
    let vectors = vectors.iter().map(|v| comp.expand(v)).collect();
    Ok(EigenPairs {
        values,
        vectors,
        residuals,
        norm_estimate: norm,
        matvecs,
    })
}

fn dense_path<T: Real, A: SymmetricOperator<T> + ?Sized>(
    comp: &mut Compressed<'_, T, A>,
    k: usize,
) -> (Vec<T>, Vec<Vec<T>>, T) {
    let n = comp.n();
    let mut a = vec![T::zero(); n * n];
    let mut e = vec![T::zero(); n];
    let mut col = vec![T::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = T::zero());
        e[j] = T::one();
        comp.apply(&e, &mut col);
        for i in 0..n {
            a[i * n + j] = col[i];
        }
    }
    // symmetrize away rounding
    for i in 0..n {
        for j in (i + 1)..n {
            let s = (a[i * n + j] + a[j * n + i]) / T::of(2.0);
            a[i * n + j] = s;
            a[j * n + i] = s;
        }
    }
    let (vals, vecs) = symmetric_eigen(n, &a);
    let norm = vals.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let vectors = (0..k).map(|c| (0..n).map(|r| vecs[r * n + c]).collect()).collect();
    (vals[..k].to_vec(), vectors, norm)
}

fn random_unit<T: Real>(n: usize, rng: &mut crate::rng::RngStream) -> Vec<T> {
    (0..n).map(|_| gaussian::<T, _>(rng)).collect()
}

/// Orthonormalizes candidates against the basis, the locked vectors and each
/// other. Returns the new unit vectors `Q` and coefficients `R` (rows: new
/// vectors, columns: candidates) with `F = Q R` for the orthogonalized
/// candidates `F`. A candidate that collapses is replaced by a fresh random
/// direction with a zero column in `R`.
fn orthonormalize_block<T: Real, A: SymmetricOperator<T> + ?Sized>(
    cands: Vec<Vec<T>>,
    basis: &[Vec<T>],
    comp: &Compressed<'_, T, A>,
    rng: &mut crate::rng::RngStream,
) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let nc = cands.len();
    let mut q: Vec<Vec<T>> = Vec::with_capacity(nc);
    let mut r: Vec<Vec<T>> = Vec::with_capacity(nc);
    for (c, mut w) in cands.into_iter().enumerate() {
        let before = dot(&w, &w).sqrt();
        comp.project_locked(&mut w);
        orthogonalize(&mut w, basis, &comp.locked);
        for _ in 0..2 {
            for (qi, qv) in q.iter().enumerate() {
                let s = dot(qv, &w);
                axpy(-s, qv, &mut w);
                r[qi][c] += s;
            }
        }
        let norm = dot(&w, &w).sqrt();
        if norm > T::of(1e-10) * before && norm > T::min_positive_value() {
            w.iter_mut().for_each(|x| *x /= norm);
            let mut row = vec![T::zero(); nc];
            row[c] = norm;
            q.push(w);
            r.push(row);
            continue;
        }
        for _attempt in 0..3 {
            let mut z = random_unit::<T>(w.len(), rng);
            comp.project_locked(&mut z);
            orthogonalize(&mut z, basis, &comp.locked);
            orthogonalize(&mut z, &q, &[]);
            let zn = dot(&z, &z).sqrt();
            if zn > T::of(1e-8) {
                z.iter_mut().for_each(|x| *x /= zn);
                q.push(z);
                r.push(vec![T::zero(); nc]);
                break;
            }
        }
    }
    (q, r)
}

fn block_lanczos<T: Real, A: SymmetricOperator<T> + ?Sized>(
    comp: &mut Compressed<'_, T, A>,
    k: usize,
    opts: &EigenOptions,
    seed: u64,
) -> Result<(Vec<T>, Vec<Vec<T>>, T), EigenError> {
    let n = comp.n();
    let free = n - comp.locked.len();
    let b = opts.block.min(free).max(1);
    let m = opts.max_basis.max(2 * k + 3 * b).min(free);
    let tol = T::of(opts.tol);
    let mut rng = rng_stream(seed);

    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + b);
    let mut h = vec![T::zero(); m * m];
    let hidx = |i: usize, j: usize| i * m + j;

    let start: Vec<Vec<T>> = (0..b).map(|_| random_unit(n, &mut rng)).collect();
    let (q0, _) = orthonormalize_block(start, &basis, comp, &mut rng);
    if q0.is_empty() {
        return Ok((Vec::new(), Vec::new(), T::zero()));
    }
    let mut pending = 0..q0.len();
    basis.extend(q0);
    let mut norm = T::zero();
    let mut worst = f64::INFINITY;

    for restart in 0..=opts.max_restarts {
        // Expand until the basis is full.
        let (next_q, rf, last) = loop {
            let mut w: Vec<Vec<T>> = Vec::with_capacity(pending.len());
            for j in pending.clone() {
                let mut y = vec![T::zero(); n];
                comp.apply(&basis[j], &mut y);
                w.push(y);
            }
            for (jj, j) in pending.clone().enumerate() {
                for i in 0..pending.start {
                    let v = dot(&basis[i], &w[jj]);
                    h[hidx(i, j)] = v;
                    h[hidx(j, i)] = v;
                }
                for (ii, i) in pending.clone().enumerate().take(jj + 1) {
                    let v = (dot(&basis[i], &w[jj]) + dot(&basis[j], &w[ii])) / T::of(2.0);
                    h[hidx(i, j)] = v;
                    h[hidx(j, i)] = v;
                }
            }
            let (q, r) = orthonormalize_block(w, &basis, comp, &mut rng);
            let last = pending.clone();
            if !q.is_empty() && basis.len() + q.len() <= m {
                pending = basis.len()..basis.len() + q.len();
                basis.extend(q);
            } else {
                break (q, r, last);
            }
        };

        let s = basis.len();
        let mut hs = vec![T::zero(); s * s];
        for i in 0..s {
            for j in 0..s {
                hs[i * s + j] = h[hidx(i, j)];
            }
        }
        let (theta, y) = symmetric_eigen(s, &hs);
        norm = theta.iter().fold(norm, |a, &t| a.max(t.abs()));
        let keff = k.min(s);
        let scale = norm.max(T::min_positive_value());
        let mut res = vec![T::zero(); keff];
        for (i, ri) in res.iter_mut().enumerate() {
            let mut acc = T::zero();
            for row in &rf {
                let mut t = T::zero();
                for (c, j) in last.clone().enumerate() {
                    t += row[c] * y[j * s + i];
                }
                acc += t * t;
            }
            *ri = acc.sqrt();
        }
        worst = res.iter().fold(0.0, |a: f64, &r| a.max((r / scale).as_f64()));
        let done = next_q.is_empty() || res.iter().all(|&r| r <= tol * scale);
        if done {
            let vecs = (0..keff)
                .map(|i| {
                    let mut x = vec![T::zero(); n];
                    for (j, bj) in basis.iter().enumerate() {
                        axpy(y[j * s + i], bj, &mut x);
                    }
                    x
                })
                .collect();
            return Ok((theta[..keff].to_vec(), vecs, norm));
        }
        if restart == opts.max_restarts {
            break;
        }

        // Thick restart: keep the lowest p Ritz vectors plus the residual block.
        let p = (k + b).max(m / 2).min(m - 2 * b).max(k).min(s);
        let kept: Vec<Vec<T>> = (0..p)
            .map(|i| {
                let mut x = vec![T::zero(); n];
                for (j, bj) in basis.iter().enumerate() {
                    axpy(y[j * s + i], bj, &mut x);
                }
                x
            })
            .collect();
        basis = kept;
        h.iter_mut().for_each(|x| *x = T::zero());
        for (i, &t) in theta.iter().take(p).enumerate() {
            h[hidx(i, i)] = t;
        }
        let take = next_q.len().min(m - p);
        pending = p..p + take;
        basis.extend(next_q.into_iter().take(take));
    }
    Err(EigenError::NoConvergence {
        restarts: opts.max_restarts,
        worst_residual: worst,
    })
}
