use num_complex::Complex;

use crate::scalar::Real;

use super::FermionError;

/// Dense `n × n` spin matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrix<T> {
    pub n: usize,
    pub e: Vec<Complex<T>>,
}

impl<T: Real> SpinMatrix<T> {
    fn from_rows(rows: &[&[(f64, f64)]]) -> Self {
        let n = rows.len();
        let e = rows
            .iter()
            .flat_map(|r| r.iter().map(|&(re, im)| Complex::new(T::of(re), T::of(im))))
            .collect();
        Self { n, e }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            e[i * n + i] = Complex::new(T::one(), T::zero());
        }
        Self { n, e }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.e[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut e = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    e[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self { n, e }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.e
            .iter()
            .zip(&other.e)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

/// Euclidean gamma matrices for one lattice dimension, indexed by lattice
/// direction (the time axis is the last one), plus `γ₅`.
#[derive(Clone, Debug)]
pub struct GammaMatrices<T> {
    pub gammas: Vec<SpinMatrix<T>>,
    pub gamma5: SpinMatrix<T>,
}

impl<T: Real> GammaMatrices<T> {
    pub fn spin_dim(&self) -> usize {
        self.gamma5.n
    }

    /// `max_{μν} ‖{γ_μ, γ_ν} − 2δ_{μν}‖_max`, together with the same check
    /// for `γ₅` against every `γ_μ` (anticommuting) and itself.
    pub fn clifford_defect(&self) -> T {
        let n = self.spin_dim();
        let id = SpinMatrix::identity(n);
        let two_id = SpinMatrix {
            n,
            e: id.e.iter().map(|z| z * T::of(2.0)).collect(),
        };
        let zero = SpinMatrix {
            n,
            e: vec![Complex::new(T::zero(), T::zero()); n * n],
        };
        let anti = |a: &SpinMatrix<T>, b: &SpinMatrix<T>| {
            let ab = a.mul(b);
            let ba = b.mul(a);
            SpinMatrix {
                n,
                e: ab.e.iter().zip(&ba.e).map(|(x, y)| x + y).collect(),
            }
        };
        let mut worst = T::zero();
        let mut all: Vec<&SpinMatrix<T>> = self.gammas.iter().collect();
        all.push(&self.gamma5);
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let target = if i == j { &two_id } else { &zero };
                worst = worst.max(anti(a, b).max_abs_diff(target));
            }
        }
        worst
    }
}

/// Hermitian gamma matrices: `σ₁, σ₂` with `γ₅ = σ₃` in two dimensions;
/// the chiral basis `γ_k = [[0, −iσ_k], [iσ_k, 0]]`, `γ₄ = [[0, 1], [1, 0]]`
/// in four. The Clifford algebra is checked before returning.
pub fn gamma_matrices<T: Real>(ndim: usize) -> Result<GammaMatrices<T>, FermionError> {
    let o = (0.0, 0.0);
    let one = (1.0, 0.0);
    let m1 = (-1.0, 0.0);
    let i = (0.0, 1.0);
    let mi = (0.0, -1.0);
    let set = match ndim {
        2 => GammaMatrices::<T> {
            gammas: vec![
                SpinMatrix::from_rows(&[&[o, one], &[one, o]]),
                SpinMatrix::from_rows(&[&[o, mi], &[i, o]]),
            ],
            gamma5: SpinMatrix::from_rows(&[&[one, o], &[o, m1]]),
        },
        4 => {
            let g1 = SpinMatrix::from_rows(&[
                &[o, o, o, mi],
                &[o, o, mi, o],
                &[o, i, o, o],
                &[i, o, o, o],
            ]);
            let g2 = SpinMatrix::from_rows(&[
                &[o, o, o, m1],
                &[o, o, one, o],
                &[o, one, o, o],
                &[m1, o, o, o],
            ]);
            let g3 = SpinMatrix::from_rows(&[
                &[o, o, mi, o],
                &[o, o, o, i],
                &[i, o, o, o],
                &[o, mi, o, o],
            ]);
            let g4 = SpinMatrix::from_rows(&[
                &[o, o, one, o],
                &[o, o, o, one],
                &[one, o, o, o],
                &[o, one, o, o],
            ]);
            let gamma5 = g1.mul(&g2).mul(&g3).mul(&g4);
            GammaMatrices {
                gammas: vec![g1, g2, g3, g4],
                gamma5,
            }
        }
        d => return Err(FermionError::UnsupportedDimension(d)),
    };
    let defect = set.clifford_defect();
    if defect > T::tolerance(1e-14) {
        return Err(FermionError::CliffordViolation(defect.as_f64()));
    }
    Ok(set)
}
