use std::sync::Arc;

use lattice_gauge::eigen::{lowest_eigenpairs, EigenOptions};
use lattice_gauge::hamiltonian::{
    build_basis, build_hamiltonian, electric_operator, gauss_generator, ground_state, link_raising_operator,
    write_spectrum_csv, GaugeBasis, HamiltonianError, Sector, DEFAULT_BUDGET,
};
use lattice_gauge::rng::rng_stream;
use lattice_gauge::sparse::CsrMatrix;
use lattice_gauge::LatticeGeometry;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::Rng;

fn geo22() -> LatticeGeometry {
    LatticeGeometry::new(&[2, 2]).unwrap()
}

fn basis(cutoff: u32, sector: Sector) -> Arc<GaugeBasis> {
    Arc::new(build_basis(&geo22(), cutoff, sector, DEFAULT_BUDGET).unwrap())
}

/// Zero-charge spectrum of the 2×2 periodic U(1) Hamiltonian, built from
/// scratch: links labeled `(x, y, dir)`, Gauss law and plaquette moves
/// written out by hand, diagonalized densely.
fn oracle_spectrum(cutoff: i32, g2: f64) -> Vec<f64> {
    let link = |x: usize, y: usize, d: usize| ((y % 2) * 2 + (x % 2)) * 2 + d;
    let r = (2 * cutoff + 1) as usize;
    let mut states = Vec::new();
    for code in 0..r.pow(8) {
        let mut c = code;
        let e: Vec<i32> = (0..8)
            .map(|_| {
                let v = (c % r) as i32 - cutoff;
                c /= r;
                v
            })
            .collect();
        let gauss_ok = (0..2).all(|x| {
            (0..2).all(|y| {
                let out = e[link(x, y, 0)] + e[link(x, y, 1)];
                let inn = e[link(x + 1, y, 0)] + e[link(x, y + 1, 1)];
                out == inn
            })
        });
        if gauss_ok {
            states.push(e);
        }
    }
    let n = states.len();
    let index = |s: &Vec<i32>| states.iter().position(|t| t == s);
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (i, s) in states.iter().enumerate() {
        h[(i, i)] = 0.5 * g2 * s.iter().map(|&e| (e * e) as f64).sum::<f64>() - 2.0 * 4.0 / g2;
        for x in 0..2 {
            for y in 0..2 {
                for sign in [1, -1] {
                    let mut t = s.clone();
                    t[link(x, y, 0)] += sign;
                    t[link(x + 1, y, 1)] += sign;
                    t[link(x, y + 1, 0)] -= sign;
                    t[link(x, y, 1)] -= sign;
                    if t.iter().all(|e| e.abs() <= cutoff) {
                        let j = index(&t).unwrap();
                        h[(j, i)] += 1.0 / g2;
                    }
                }
            }
        }
    }
    let mut vals: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

#[test]
fn projected_spectrum_matches_dense_oracle() {
    for (cutoff, g2, k) in [(1u32, 1.0, 12), (1, 0.5, 12), (2, 1.0, 8)] {
        let zero = Sector::zero_charge(&geo22());
        let h = build_hamiltonian::<f64>(basis(cutoff, zero), g2).unwrap();
        let oracle = oracle_spectrum(cutoff as i32, g2);
        assert_eq!(h.dim(), oracle.len());
        let ours = ground_state(&h, k).unwrap().values;
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "Λ={cutoff} g²={g2}: {a} vs {b}");
        }
    }
}

#[test]
fn structure_identities_hold_exactly() {
    for cutoff in [1u32, 2] {
        let b = basis(cutoff, Sector::Full);
        let h = build_hamiltonian::<f64>(b.clone(), 1.3).unwrap();
        assert!(h.max_asymmetry() <= 1e-12);
        assert!(h.gauss_commutator_deviation() <= 1e-12);
        for l in 0..b.n_links() {
            let e = electric_operator::<f64>(&b, l);
            let u = link_raising_operator::<f64>(&b, l);
            assert_eq!(CsrMatrix::commutator_deviation(&e, &u, Some(&u)), 0.0);
        }
    }
}

#[test]
fn gauss_generators_have_integer_spectrum() {
    let b = basis(2, Sector::Full);
    for x in b.geometry().sites() {
        let g = gauss_generator::<f64>(&b, x);
        assert!(g.triplets().all(|(i, j, v)| i == j && v.fract() == 0.0));
    }
}

#[test]
fn electric_field_annihilates_vacuum() {
    let b = basis(2, Sector::Full);
    let vac = b.index_of(&[0; 8]).unwrap();
    let mut x = vec![0.0; b.dim()];
    x[vac] = 1.0;
    for l in 0..8 {
        assert!(electric_operator::<f64>(&b, l).mul_vec(&x).iter().all(|&v| v == 0.0));
    }
}

#[test]
fn full_and_projected_sectors_agree() {
    for cutoff in [1u32, 2] {
        let full = build_hamiltonian::<f64>(basis(cutoff, Sector::Full), 1.0).unwrap();
        let restricted = full.restricted_to_charges(&[0; 4]).unwrap();
        let a = ground_state(&restricted, 6).unwrap();
        let proj = build_hamiltonian::<f64>(basis(cutoff, Sector::zero_charge(&geo22())), 1.0).unwrap();
        assert_eq!(restricted.sector_dim(), proj.dim());
        let b = ground_state(&proj, 6).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-8);
        }
        // restricted eigenvectors live in the zero-charge sector
        let v = &a.vectors[0];
        let mut charge = vec![0.0; v.len()];
        for x in full.basis().geometry().sites() {
            gauss_generator::<f64>(full.basis(), x).matvec(v, &mut charge);
            assert!(charge.iter().all(|c| c.abs() < 1e-12));
        }
    }
}

#[test]
fn charged_sector_agrees_between_constructions() {
    let charges = vec![1, -1, 0, 0];
    let full = build_hamiltonian::<f64>(basis(2, Sector::Full), 0.8).unwrap();
    let restricted = full.restricted_to_charges(&charges).unwrap();
    let proj = build_hamiltonian::<f64>(
        basis(2, Sector::GaussProjected { charges: charges.clone() }),
        0.8,
    )
    .unwrap();
    let a = ground_state(&restricted, 4).unwrap();
    let b = ground_state(&proj, 4).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() <= 1e-8);
    }
}

#[test]
fn spectrum_is_independent_of_basis_order() {
    let h = build_hamiltonian::<f64>(basis(2, Sector::zero_charge(&geo22())), 1.0).unwrap();
    let n = h.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng_stream(3));
    let permuted = CsrMatrix::from_triplets(n, n, h.matrix().triplets().map(|(i, j, v)| (perm[i], perm[j], v)).collect());
    let a = ground_state(&h, 5).unwrap();
    let b = ground_state(&permuted, 5).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() <= 1e-9);
    }
}

#[test]
fn gap_is_positive_at_unit_coupling() {
    let h = build_hamiltonian::<f64>(basis(1, Sector::zero_charge(&geo22())), 1.0).unwrap();
    let oracle = oracle_spectrum(1, 1.0);
    let gap = ground_state(&h, 2).unwrap().gap().unwrap();
    assert!(gap > 0.0);
    assert!((gap - (oracle[1] - oracle[0])).abs() < 1e-9);
}

#[test]
fn cutoff_convergence() {
    let zero = Sector::zero_charge(&geo22());
    let e0 = |cutoff: u32, g2: f64| {
        let h = build_hamiltonian::<f64>(basis(cutoff, zero.clone()), g2).unwrap();
        ground_state(&h, 1).unwrap().values[0]
    };
    for g2 in [1.0, 2.0, 4.0] {
        let e: Vec<f64> = (1..=4).map(|c| e0(c, g2)).collect();
        // a larger truncated space can only lower the ground state
        assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-12), "g²={g2}: {e:?}");
        if g2 >= 2.0 {
            assert!((e[2] - e[3]).abs() < 1e-6, "g²={g2}: {e:?}");
        }
    }
}

#[test]
fn strong_coupling_limit() {
    let g2 = 1e5_f64;
    let h = build_hamiltonian::<f64>(basis(2, Sector::zero_charge(&geo22())), g2).unwrap();
    let e = ground_state(&h, 1).unwrap().values[0];
    assert!((e + 8.0 / g2).abs() < 1e-8);
}

#[test]
fn lanczos_agrees_with_dense_oracle_on_random_sparse_matrix() {
    let n = 700;
    let mut rng = rng_stream(17);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, rng.random_range(-5.0..5.0)));
        for _ in 0..4 {
            let j = rng.random_range(0..n);
            let v: f64 = rng.random_range(-1.0..1.0);
            t.push((i, j, v));
            t.push((j, i, v));
        }
    }
    let a = CsrMatrix::from_triplets(n, n, t);
    let dense = DMatrix::from_row_slice(n, n, &a.to_dense());
    let mut oracle: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    oracle.sort_by(f64::total_cmp);
    let opts = EigenOptions {
        k: 8,
        ..EigenOptions::default()
    };
    let pairs = lowest_eigenpairs(&a, &opts).unwrap();
    for (x, y) in pairs.values.iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
    assert!(pairs.max_relative_residual() < 1e-8);
}

#[test]
fn diagonal_matrix_gives_smallest_entries() {
    let d: Vec<f64> = (0..500).map(|i| ((i * 37) % 500) as f64 * 0.1).collect();
    let a = CsrMatrix::diagonal(&d);
    let pairs = ground_state(&a, 3).unwrap();
    assert_eq!(pairs.values.len(), 3);
    for (i, v) in pairs.values.iter().enumerate() {
        assert!((v - 0.1 * i as f64).abs() < 1e-10);
    }
}

#[test]
fn budget_error_reports_dimension() {
    let err = build_basis(&geo22(), 4, Sector::Full, DEFAULT_BUDGET).unwrap_err();
    assert_eq!(
        err,
        HamiltonianError::BudgetExceeded {
            dimension: 9u128.pow(8),
            budget: DEFAULT_BUDGET
        }
    );
}

#[test]
fn spectrum_csv() {
    let mut out = Vec::new();
    write_spectrum_csv(&[-1.5, 2.0], &mut out).unwrap();
    let s = String::from_utf8(out).unwrap();
    assert!(s.starts_with("index,eigenvalue\n0,-1.5"));
}
