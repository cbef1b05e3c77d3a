use std::f64::consts::PI;
use std::sync::Arc;

use lattice_gauge::fermion::{
    dirac_operator, hopping_operator, FermionError, FermionParams, SolveMethod, SolveOptions,
};
use lattice_gauge::rng::rng_stream;
use lattice_gauge::wilson::random_gauge_transform;
use lattice_gauge::{GaugeConfiguration, GroupLabel, LatticeGeometry};
use nalgebra::{Complex, DMatrix, SymmetricEigen};

fn geo(extents: &[usize]) -> Arc<LatticeGeometry> {
    Arc::new(LatticeGeometry::new(extents).unwrap())
}

fn dense(m: &lattice_gauge::sparse::CsrMatrix<Complex<f64>>) -> DMatrix<Complex<f64>> {
    DMatrix::from_row_slice(m.nrows(), m.ncols(), &m.to_dense())
}

/// `m − 2t Σ_μ cos k_μ` over the momentum grid, antiperiodic in the last axis
/// when requested.
fn free_dispersion(extents: &[usize], m: f64, t: f64, antiperiodic: bool) -> Vec<f64> {
    let mut out = vec![m];
    for (mu, &l) in extents.iter().enumerate() {
        let shift = if antiperiodic && mu + 1 == extents.len() { 0.5 } else { 0.0 };
        out = out
            .iter()
            .flat_map(|&e| (0..l).map(move |n| e - 2.0 * t * (2.0 * PI * (n as f64 + shift) / l as f64).cos()))
            .collect();
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn free_spectrum_in_four_dimensions() {
    let cfg = GaugeConfiguration::<f64>::cold(geo(&[4, 4, 4, 4]), GroupLabel::U1);
    let h = hopping_operator(&cfg, &FermionParams::new(0.0, 1.0, true)).unwrap();
    let expect = free_dispersion(&[4, 4, 4, 4], 0.0, 1.0, true);
    let got = h.spectrum().unwrap();
    assert_eq!(got.len(), expect.len());
    for (a, b) in got.iter().zip(&expect) {
        assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }
}

#[test]
fn free_ring_spectrum_with_mass_and_both_boundaries() {
    for anti in [false, true] {
        let cfg = GaugeConfiguration::<f64>::cold(geo(&[8]), GroupLabel::U1);
        let h = hopping_operator(&cfg, &FermionParams::new(0.3, 0.7, anti)).unwrap();
        let expect = free_dispersion(&[8], 0.3, 0.7, anti);
        for (a, b) in h.spectrum().unwrap().iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn single_precision_spectrum() {
    let cfg = GaugeConfiguration::<f32>::cold(geo(&[8, 4]), GroupLabel::U1);
    let h = hopping_operator(&cfg, &FermionParams::new(0.1f32, 1.0, true)).unwrap();
    let expect = free_dispersion(&[8, 4], 0.1, 1.0, true);
    for (a, b) in h.spectrum().unwrap().iter().zip(&expect) {
        assert!((*a as f64 - b).abs() <= 1e-4);
    }
}

#[test]
fn hopping_spectrum_matches_dense_oracle_and_is_gauge_invariant() {
    for (g, seed) in [(GroupLabel::U1, 1), (GroupLabel::SU2, 2), (GroupLabel::SU3, 3)] {
        let gm = geo(&[2, 2, 2, 2]);
        let mut rng = rng_stream(seed);
        let cfg = GaugeConfiguration::<f64>::hot(gm.clone(), g, &mut rng);
        let p = FermionParams::new(0.2, 0.9, true);
        let h = hopping_operator(&cfg, &p).unwrap();
        let mut oracle: Vec<f64> = SymmetricEigen::new(dense(h.matrix())).eigenvalues.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        let ours = h.spectrum().unwrap();
        let t = random_gauge_transform(&gm, g, &mut rng);
        let ht = hopping_operator(&cfg.gauge_transform(&t).unwrap(), &p).unwrap();
        for ((a, b), c) in ours.iter().zip(&oracle).zip(&ht.spectrum().unwrap()) {
            assert!((a - b).abs() <= 1e-10);
            assert!((a - c).abs() <= 1e-10);
        }
    }
}

#[test]
fn gamma5_hermiticity_in_two_and_four_dimensions() {
    let mut rng = rng_stream(11);
    for (extents, g) in [
        (vec![4, 4], GroupLabel::U1),
        (vec![4, 4], GroupLabel::SU3),
        (vec![2, 2, 2, 2], GroupLabel::SU2),
        (vec![2, 2, 2, 2], GroupLabel::SU3),
    ] {
        let cfg = GaugeConfiguration::<f64>::hot(geo(&extents), g, &mut rng);
        let d = dirac_operator(&cfg, &FermionParams::new(0.05, 1.0, true)).unwrap();
        assert!(d.gamma5_hermiticity_defect() <= 1e-12, "{extents:?} {g:?}");
        assert!(d.gammas().clifford_defect() <= 1e-14);
    }
}

#[test]
fn dirac_determinant_is_gauge_invariant_and_matches_oracle() {
    for (g, seed) in [(GroupLabel::U1, 5), (GroupLabel::SU2, 6), (GroupLabel::SU3, 7)] {
        let gm = geo(&[2, 2, 2, 2]);
        let mut rng = rng_stream(seed);
        let cfg = GaugeConfiguration::<f64>::hot(gm.clone(), g, &mut rng);
        let p = FermionParams::new(0.3, 1.0, true);
        let d = dirac_operator(&cfg, &p).unwrap();
        let det = d.determinant().unwrap();
        let t = random_gauge_transform(&gm, g, &mut rng);
        let dt = dirac_operator(&cfg.gauge_transform(&t).unwrap(), &p)
            .unwrap()
            .determinant()
            .unwrap();
        let r = det.ratio(&dt);
        assert!((r - Complex::new(1.0, 0.0)).norm() <= 1e-8, "{g:?}: ratio {r}");

        let oracle = dense(d.matrix()).determinant();
        let rel = (det.value() - oracle).norm() / oracle.norm();
        assert!(rel <= 1e-9, "{g:?}: {} vs {oracle}", det.value());
    }
}

#[test]
fn hopping_determinant_is_product_of_eigenvalues() {
    let cfg = GaugeConfiguration::<f64>::hot(geo(&[4, 4]), GroupLabel::SU2, &mut rng_stream(4));
    let h = hopping_operator(&cfg, &FermionParams::new(0.4, 1.0, true)).unwrap();
    let det = h.determinant().unwrap();
    let eig: Vec<f64> = SymmetricEigen::new(dense(h.matrix())).eigenvalues.iter().copied().collect();
    let log_abs: f64 = eig.iter().map(|e| e.abs().ln()).sum();
    let sign = eig.iter().filter(|e| **e < 0.0).count() % 2;
    assert!((det.log_abs - log_abs).abs() <= 1e-9);
    assert!((det.phase.re - if sign == 0 { 1.0 } else { -1.0 }).abs() <= 1e-9);
    assert!(det.phase.im.abs() <= 1e-9);
}

#[test]
fn free_propagator_matches_momentum_sum() {
    let l = 8;
    let (m, t) = (0.5, 1.0);
    for anti in [false, true] {
        let cfg = GaugeConfiguration::<f64>::cold(geo(&[l]), GroupLabel::U1);
        let h = hopping_operator(&cfg, &FermionParams::new(m, t, anti)).unwrap();
        let sol = h.propagator(0, 0, &SolveOptions::default()).unwrap();
        assert!(sol.residual <= 1e-10);
        let shift = if anti { 0.5 } else { 0.0 };
        for x in 0..l {
            let g: Complex<f64> = (0..l)
                .map(|n| {
                    let k = 2.0 * PI * (n as f64 + shift) / l as f64;
                    Complex::from_polar(1.0, k * x as f64) / (m - 2.0 * t * k.cos())
                })
                .sum::<Complex<f64>>()
                / l as f64;
            assert!((sol.x[x] - g).norm() <= 1e-9, "x={x}: {} vs {g}", sol.x[x]);
        }
    }
}

#[test]
fn propagator_contraction_is_gauge_invariant() {
    let g = GroupLabel::SU3;
    let gm = geo(&[4, 4, 4, 2]);
    let mut rng = rng_stream(9);
    let cfg = GaugeConfiguration::<f64>::hot(gm.clone(), g, &mut rng);
    let t = random_gauge_transform(&gm, g, &mut rng);
    let cfg_t = cfg.gauge_transform(&t).unwrap();
    let p = FermionParams::new(0.6, 1.0, true);
    let corr = |c: &GaugeConfiguration<f64>| {
        let h = hopping_operator(c, &p).unwrap();
        let mut out = vec![0.0; gm.volume()];
        for b in 0..3 {
            let sol = h.propagator(0, b, &SolveOptions::default()).unwrap();
            assert!(sol.residual <= 1e-10);
            for (x, o) in out.iter_mut().enumerate() {
                *o += (0..3).map(|a| sol.x[h.index(x, a)].norm_sqr()).sum::<f64>();
            }
        }
        out
    };
    for (a, b) in corr(&cfg).iter().zip(&corr(&cfg_t)) {
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-3));
    }
}

#[test]
fn dirac_propagator_solves_on_hot_background() {
    let cfg = GaugeConfiguration::<f64>::hot(geo(&[4, 4]), GroupLabel::SU2, &mut rng_stream(21));
    let d = dirac_operator(&cfg, &FermionParams::new(0.2, 1.0, true)).unwrap();
    let sol = d.propagator(3, 1, 0, &SolveOptions::default()).unwrap();
    assert!(sol.residual <= 1e-10);
    assert_eq!(sol.method, SolveMethod::BiCgStab);
}

#[test]
fn zero_mode_is_reported_singular() {
    // periodic ring of length 4 at zero mass has eigenvalues −2cos(kπ/2) ∋ 0
    let cfg = GaugeConfiguration::<f64>::cold(geo(&[4]), GroupLabel::U1);
    let h = hopping_operator(&cfg, &FermionParams::new(0.0, 1.0, false)).unwrap();
    assert!(matches!(
        h.propagator(0, 0, &SolveOptions::default()),
        Err(FermionError::Singular { .. })
    ));
}

#[test]
fn non_finite_parameters_are_rejected() {
    let cfg = GaugeConfiguration::<f64>::cold(geo(&[4, 4]), GroupLabel::U1);
    assert!(matches!(
        hopping_operator(&cfg, &FermionParams::new(f64::NAN, 1.0, false)),
        Err(FermionError::InvalidParams(_))
    ));
}
