//! Compressed sparse row matrices over real or complex entries.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, One, Zero};
use rayon::prelude::*;

use crate::scalar::Real;

/// Matrix entry type: a [`Real`] scalar or a complex number over one.
pub trait Entry:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    type Real: Real;
    fn conj(self) -> Self;
    fn modulus(self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    fn scale_real(self, r: Self::Real) -> Self;
}

macro_rules! real_entry {
    ($t:ty) => {
        impl Entry for $t {
            type Real = $t;
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn modulus(self) -> Self {
                self.abs()
            }
            #[inline]
            fn from_real(r: Self) -> Self {
                r
            }
            #[inline]
            fn scale_real(self, r: Self) -> Self {
                self * r
            }
        }
    };
}
real_entry!(f32);
real_entry!(f64);

impl<T: Real> Entry for Complex<T> {
    type Real = T;
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }
    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    #[inline]
    fn scale_real(self, r: T) -> Self {
        self * r
    }
}

/// Row-major sparse matrix with sorted, duplicate-free column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<S> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<S>,
}

/// Incremental row-by-row construction. Duplicate columns within a row are summed.
pub struct CsrBuilder<S> {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<S>,
    row: Vec<(u32, S)>,
}

impl<S: Entry> CsrBuilder<S> {
    pub fn new(ncols: usize) -> Self {
        assert!(ncols <= u32::MAX as usize, "column count exceeds u32 indexing");
        Self {
            ncols,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
            row: Vec::new(),
        }
    }

    pub fn with_capacity(ncols: usize, nrows: usize, nnz: usize) -> Self {
        let mut b = Self::new(ncols);
        b.indptr.reserve(nrows);
        b.indices.reserve(nnz);
        b.values.reserve(nnz);
        b
    }

    #[inline]
    pub fn push(&mut self, col: usize, value: S) {
        debug_assert!(col < self.ncols);
        self.row.push((col as u32, value));
    }

    /// Closes the current row, merging duplicates and dropping exact zeros.
    pub fn finish_row(&mut self) {
        self.row.sort_unstable_by_key(|&(c, _)| c);
        let mut i = 0;
        while i < self.row.len() {
            let c = self.row[i].0;
            let mut v = self.row[i].1;
            i += 1;
            while i < self.row.len() && self.row[i].0 == c {
                v += self.row[i].1;
                i += 1;
            }
            if v != S::zero() {
                self.indices.push(c);
                self.values.push(v);
            }
        }
        self.row.clear();
        self.indptr.push(self.indices.len());
    }

    pub fn finish(self) -> CsrMatrix<S> {
        assert!(self.row.is_empty(), "unfinished row");
        CsrMatrix {
            nrows: self.indptr.len() - 1,
            ncols: self.ncols,
            indptr: self.indptr,
            indices: self.indices,
            values: self.values,
        }
    }
}

impl<S: Entry> CsrMatrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn diagonal(d: &[S]) -> Self {
        let mut b = CsrBuilder::with_capacity(d.len(), d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            b.push(i, v);
            b.finish_row();
        }
        b.finish()
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![S::one(); n])
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, S)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut b = CsrBuilder::with_capacity(ncols, nrows, triplets.len());
        let mut it = triplets.into_iter().peekable();
        for r in 0..nrows {
            while let Some(&(tr, c, v)) = it.peek() {
                if tr != r {
                    break;
                }
                assert!(c < ncols, "column {c} out of range");
                b.push(c, v);
                it.next();
            }
            b.finish_row();
        }
        assert!(it.next().is_none(), "row index out of range");
        b.finish()
    }

    /// Dense row-major input; zeros are skipped.
    pub fn from_dense(nrows: usize, ncols: usize, dense: &[S]) -> Self {
        assert_eq!(dense.len(), nrows * ncols);
        let mut b = CsrBuilder::new(ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                let v = dense[r * ncols + c];
                if v != S::zero() {
                    b.push(c, v);
                }
            }
            b.finish_row();
        }
        b.finish()
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> (&[u32], &[S]) {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => S::zero(),
        }
    }

    /// Iterates over stored `(row, col, value)` entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&c, &v)| (i, c as usize, v))
        })
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[S]) -> S {
        let (cols, vals) = self.row(i);
        let mut acc = S::zero();
        for (&c, &v) in cols.iter().zip(vals) {
            acc += v * x[c as usize];
        }
        acc
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        if self.nnz() < 1 << 16 {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        } else {
            y.par_chunks_mut(4096).enumerate().for_each(|(chunk, ys)| {
                let base = chunk * 4096;
                for (k, yi) in ys.iter_mut().enumerate() {
                    *yi = self.row_dot(base + k, x);
                }
            });
        }
    }

    /// `y_i = (A x)_i` for the listed rows only; other entries of `y` are untouched.
    pub fn matvec_rows(&self, rows: &[usize], x: &[S], y: &mut [S]) {
        for &i in rows {
            y[i] = self.row_dot(i, x);
        }
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c as usize + 1] += 1;
        }
        for k in 0..self.ncols {
            counts[k + 1] += counts[k];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0u32; self.nnz()];
        let mut values = vec![S::zero(); self.nnz()];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                let slot = next[c as usize];
                indices[slot] = i as u32;
                values[slot] = v.conj();
                next[c as usize] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr,
            indices,
            values,
        }
    }

    pub fn scale(&self, s: S) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v = *v * s;
        }
        out
    }

    /// Sparse linear combination `a·self + b·other`.
    pub fn add_scaled(&self, a: S, other: &Self, b: S) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = CsrBuilder::with_capacity(self.ncols, self.nrows, self.nnz() + other.nnz());
        for i in 0..self.nrows {
            let (c1, v1) = self.row(i);
            let (c2, v2) = other.row(i);
            for (&c, &v) in c1.iter().zip(v1) {
                out.push(c as usize, a * v);
            }
            for (&c, &v) in c2.iter().zip(v2) {
                out.push(c as usize, b * v);
            }
            out.finish_row();
        }
        out.finish()
    }

    /// Row `i` of `self · other` as merged `(col, value)` pairs.
    fn product_row(&self, other: &Self, i: usize, acc: &mut Vec<(u32, S)>) {
        acc.clear();
        let (cols, vals) = self.row(i);
        for (&k, &a) in cols.iter().zip(vals) {
            let (c2, v2) = other.row(k as usize);
            for (&j, &b) in c2.iter().zip(v2) {
                acc.push((j, a * b));
            }
        }
        merge_sorted(acc);
    }

    /// Sparse matrix product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut b = CsrBuilder::new(other.ncols);
        let mut acc = Vec::new();
        for i in 0..self.nrows {
            self.product_row(other, i, &mut acc);
            for &(c, v) in acc.iter() {
                b.push(c as usize, v);
            }
            b.finish_row();
        }
        b.finish()
    }

    /// Largest stored entry modulus.
    pub fn max_abs(&self) -> S::Real {
        self.values
            .iter()
            .map(|v| v.modulus())
            .fold(S::Real::zero(), |a, b| Float::max(a, b))
    }

    /// `‖A − A†‖_max`, computed without forming the adjoint.
    pub fn max_asymmetry(&self) -> S::Real {
        assert_eq!(self.nrows, self.ncols, "asymmetry of a non-square matrix");
        (0..self.nrows)
            .into_par_iter()
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut worst = S::Real::zero();
                for (&j, &v) in cols.iter().zip(vals) {
                    let mirror = self.get(j as usize, i);
                    worst = Float::max(worst, (v - mirror.conj()).modulus());
                }
                worst
            })
            .reduce(S::Real::zero, |a, b| Float::max(a, b))
    }

    /// `max |([A, B] − C)_{ij}|`, streamed one row at a time so no product
    /// matrix is ever stored. `C = None` checks `[A, B] = 0`.
    pub fn commutator_deviation(a: &Self, b: &Self, c: Option<&Self>) -> S::Real {
        let n = a.nrows;
        assert!(a.ncols == n && b.nrows == n && b.ncols == n, "commutator needs equal square matrices");
        if let Some(c) = c {
            assert!(c.nrows == n && c.ncols == n);
        }
        (0..n)
            .into_par_iter()
            .fold(
                || (Vec::new(), Vec::new(), S::Real::zero()),
                |(mut ab, mut ba, worst), i| {
                    a.product_row(b, i, &mut ab);
                    b.product_row(a, i, &mut ba);
                    for x in ba.iter_mut() {
                        x.1 = -x.1;
                    }
                    ab.extend_from_slice(&ba);
                    if let Some(c) = c {
                        let (cols, vals) = c.row(i);
                        ab.extend(cols.iter().zip(vals).map(|(&j, &v)| (j, -v)));
                    }
                    merge_sorted(&mut ab);
                    let w = ab.iter().map(|&(_, v)| v.modulus()).fold(worst, |x, y| Float::max(x, y));
                    (ab, ba, w)
                },
            )
            .map(|(_, _, w)| w)
            .reduce(S::Real::zero, |x, y| Float::max(x, y))
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<S> {
        let mut d = vec![S::zero(); self.nrows * self.ncols];
        for (i, j, v) in self.triplets() {
            d[i * self.ncols + j] = v;
        }
        d
    }
}

/// Sorts by column and sums duplicates in place.
fn merge_sorted<S: Entry>(v: &mut Vec<(u32, S)>) {
    v.sort_unstable_by_key(|&(c, _)| c);
    let mut w = 0;
    for r in 0..v.len() {
        if w > 0 && v[w - 1].0 == v[r].0 {
            let add = v[r].1;
            v[w - 1].1 += add;
        } else {
            v[w] = v[r];
            w += 1;
        }
    }
    v.truncate(w);
}
