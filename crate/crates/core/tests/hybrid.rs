use std::f64::consts::PI;
use std::fs;
use std::sync::Arc;

use lattice_gauge::fermion::{hopping_operator, FermionParams};
use lattice_gauge::hybrid::{
    condensate_link, condensate_plaquette_trace, cost_estimate, decode_config, encode_config, import_config,
    inspect, polar_project, replay_archive, reweight, strategy2_run, summed_condensate_link, ConfigMetadata,
    CostQuery, FormatError, HybridError, SiteVector, Strategy2Params,
};
use lattice_gauge::rng::rng_stream;
use lattice_gauge::wilson::{Algorithm, McParams};
use lattice_gauge::{GaugeConfiguration, GroupElement, GroupLabel, LatticeGeometry, LinkIndex};
use num_complex::Complex;
use proptest::prelude::*;

const GROUPS: [GroupLabel; 3] = [GroupLabel::U1, GroupLabel::SU2, GroupLabel::SU3];

fn meta() -> ConfigMetadata {
    ConfigMetadata {
        beta: 2.25,
        seed: 99,
        sweep: 1234,
    }
}

fn hot(extents: &[usize], g: GroupLabel, seed: u64) -> GaugeConfiguration<f64> {
    GaugeConfiguration::hot(Arc::new(LatticeGeometry::new(extents).unwrap()), g, &mut rng_stream(seed))
}

#[test]
fn four_dimensional_round_trip_is_bitwise() {
    for (i, g) in GROUPS.into_iter().enumerate() {
        let cfg = hot(&[4, 4, 4, 4], g, i as u64);
        let bytes = encode_config(&cfg, &meta());
        let (back, header) = decode_config::<f64>(&bytes).unwrap();
        assert_eq!(header.group, g);
        assert_eq!(header.extents, vec![4, 4, 4, 4]);
        assert_eq!(header.metadata, meta());
        for (a, b) in cfg.links().iter().zip(back.links()) {
            let (a, b) = (a.matrix(), b.matrix());
            for r in 0..g.n() {
                for c in 0..g.n() {
                    assert_eq!(a[(r, c)].re.to_bits(), b[(r, c)].re.to_bits());
                    assert_eq!(a[(r, c)].im.to_bits(), b[(r, c)].im.to_bits());
                }
            }
        }
        assert_eq!(encode_config(&back, &meta()), bytes);
        let (streamed, _) = import_config::<f64, _>(&bytes[..]).unwrap();
        assert_eq!(streamed.links(), back.links());
    }
}

#[test]
fn scaled_link_is_rejected_with_its_index() {
    let mut cfg = hot(&[4, 4, 4, 4], GroupLabel::SU2, 3);
    let link = LinkIndex { site: 37, dir: 2 };
    let bad = cfg.link(link).matrix().scale(1.1);
    cfg.set_link(link, GroupElement::from_matrix_unchecked(GroupLabel::SU2, bad));
    let err = decode_config::<f64>(&encode_config(&cfg, &meta())).unwrap_err();
    let id = cfg.geometry().link_id(link);
    assert!(matches!(err, FormatError::NonUnitary { link, .. } if link == id), "{err:?}");
}

#[test]
fn inspect_classifies_files() {
    let cfg = hot(&[4, 4, 2, 2], GroupLabel::SU3, 8);
    let bytes = encode_config(&cfg, &meta());
    let ok = inspect(&bytes);
    assert!(ok.verdict.is_ok());
    assert_eq!(ok.header.unwrap().metadata.sweep, 1234);

    let mut flipped = bytes.clone();
    let mid = flipped.len() / 2;
    flipped[mid] ^= 0x10;
    let r = inspect(&flipped);
    assert!(r.header.is_some());
    assert!(matches!(r.verdict, Err(FormatError::ChecksumMismatch { .. })));

    let r = inspect(&bytes[..bytes.len() - 9]);
    assert!(matches!(r.verdict, Err(FormatError::ChecksumMismatch { .. })));

    let mut magic = bytes.clone();
    magic[0] = b'X';
    assert!(matches!(inspect(&magic).verdict, Err(FormatError::BadMagic(_))));
}

fn small_params(hopping: f64, beta: f64, extents: &[usize]) -> Strategy2Params {
    let mc = McParams {
        beta,
        n_therm: 20,
        seed: 5,
        algorithm: Algorithm::Metropolis,
        ..McParams::default()
    };
    let mut p = Strategy2Params::new(mc, extents, GroupLabel::SU2, FermionParams::new(0.8, hopping, true), 4);
    p.pilot_sweeps = 120;
    p.min_separation = 3;
    p
}

#[test]
fn zero_hopping_reweighting_equals_quenched_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let report = strategy2_run(&small_params(0.0, 2.0, &[4, 4, 2, 4]), dir.path()).unwrap();
    let r = &report.result;
    assert_eq!(r.weight_sum_ratio, 1.0);
    for (q, w) in r.quenched.iter().zip(&r.reweighted) {
        assert_eq!(q.value.to_bits(), w.value.to_bits(), "{}", q.name);
        assert_eq!(q.error.to_bits(), w.error.to_bits(), "{}", q.name);
        assert_eq!(w.imag, 0.0);
    }
}

/// `C(t) = Σ_{x: x_t = t} |G(x)|²` with `G` the free propagator from the
/// origin, summed in momentum space.
fn free_correlator(extents: &[usize], m: f64, t: f64) -> Vec<f64> {
    let d = extents.len();
    let vol: usize = extents.iter().product();
    let mut momenta: Vec<Vec<f64>> = vec![vec![]];
    for (mu, &l) in extents.iter().enumerate() {
        let shift = if mu + 1 == d { 0.5 } else { 0.0 };
        momenta = momenta
            .into_iter()
            .flat_map(|k| {
                (0..l).map(move |n| {
                    let mut k = k.clone();
                    k.push(2.0 * PI * (n as f64 + shift) / l as f64);
                    k
                })
            })
            .collect();
    }
    let mut corr = vec![0.0; extents[d - 1]];
    for site in 0..vol {
        let mut x = Vec::with_capacity(d);
        let mut s = site;
        for &l in extents {
            x.push(s % l);
            s /= l;
        }
        let g: Complex<f64> = momenta
            .iter()
            .map(|k| {
                let phase: f64 = k.iter().zip(&x).map(|(k, &x)| k * x as f64).sum();
                let e = m - 2.0 * t * k.iter().map(|k| k.cos()).sum::<f64>();
                Complex::from_polar(1.0, phase) / e
            })
            .sum::<Complex<f64>>()
            / vol as f64;
        corr[x[d - 1]] += g.norm_sqr();
    }
    corr
}

#[test]
fn ordered_background_gives_free_correlator() {
    let extents = [4, 4, 4, 4];
    let dir = tempfile::tempdir().unwrap();
    let mut params = small_params(0.1, 1e12, &extents);
    params.fermion = FermionParams::new(1.5, 0.1, true);
    let report = strategy2_run(&params, dir.path()).unwrap();
    let expect = free_correlator(&extents, 1.5, 0.1);
    for m in &report.result.measurements {
        assert!((m.observables[0] - 1.0).abs() < 1e-6);
        for (got, want) in m.observables[1..].iter().zip(&expect) {
            // antiperiodic paths cancel exactly at half extent, where the oracle is pure roundoff
            assert!((got - want).abs() <= 1e-6 * want + 1e-20, "{got} vs {want}");
        }
    }
}

#[test]
fn replay_and_hand_recomputation_agree_with_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let params = small_params(0.3, 2.0, &[4, 4, 4, 2]);
    let report = strategy2_run(&params, dir.path()).unwrap();
    assert_eq!(report.files.len(), 4);
    assert!(report.separation >= params.min_separation);

    let replay = replay_archive(dir.path(), &params.fermion).unwrap();
    assert_eq!(replay, report.result);

    // weights and the reweighted plaquette from the files alone
    let mut dets = Vec::new();
    let mut plaq = Vec::new();
    for f in &report.files {
        let (cfg, _) = import_config::<f64, _>(fs::File::open(dir.path().join(f)).unwrap()).unwrap();
        let det = hopping_operator(&cfg, &params.fermion).unwrap().determinant().unwrap();
        dets.push(det);
        plaq.push(cfg.average_plaquette());
    }
    let max_log = dets.iter().map(|d| d.log_abs).fold(f64::MIN, f64::max);
    let w: Vec<Complex<f64>> = dets.iter().map(|d| d.phase * (d.log_abs - max_log).exp()).collect();
    let num: Complex<f64> = w.iter().zip(&plaq).map(|(w, p)| w * p).sum();
    let value = num / w.iter().sum::<Complex<f64>>();
    let est = &report.result.reweighted[0];
    assert_eq!(est.name, "plaquette");
    assert!((est.value - value.re).abs() <= 1e-12);
    assert!((est.imag - value.im).abs() <= 1e-12);
}

#[test]
fn archive_rejects_foreign_files() {
    let dir = tempfile::tempdir().unwrap();
    let params = small_params(0.3, 2.0, &[2, 2, 2, 2]);
    let report = strategy2_run(&params, dir.path()).unwrap();
    let path = dir.path().join(&report.files[1]);
    let mut bytes = fs::read(&path).unwrap();
    let n = bytes.len();
    bytes[n - 20] ^= 1;
    fs::write(&path, bytes).unwrap();
    assert!(matches!(
        replay_archive(dir.path(), &params.fermion),
        Err(HybridError::Format(FormatError::ChecksumMismatch { .. }))
    ));
}

#[test]
fn reweighting_needs_two_measurements() {
    assert!(matches!(reweight(vec![], &[]), Err(HybridError::InvalidParams(_))));
}

#[test]
fn cost_scaling_factors() {
    let c = |s, a| {
        cost_estimate(&CostQuery {
            lattice_size: s,
            lattice_spacing: a,
        })
        .unwrap()
    };
    assert_eq!(c(2.0, 1.0), 32.0);
    assert_eq!(c(1.0, 0.5), 128.0);
    assert_eq!(c(2.0, 0.5), 4096.0);
}

#[test]
fn rank_one_links_are_not_projectable_but_sums_are() {
    let mut rng = rng_stream(12);
    let phi = SiteVector::<f64>::random(3, 8, &mut rng);
    let u = condensate_link(phi.at(0), phi.at(1));
    assert!(matches!(polar_project(&u, true, 1e-8), Err(HybridError::RankDeficient { .. })));
    let xs: Vec<&[Complex<f64>]> = (0..4).map(|i| phi.at(i)).collect();
    let ys: Vec<&[Complex<f64>]> = (4..8).map(|i| phi.at(i)).collect();
    let m = summed_condensate_link(&xs, &ys);
    let p = polar_project(&m, true, 1e-8).unwrap();
    assert!(p.unitarity_defect() < 1e-12);
    assert!((p.determinant() - Complex::new(1.0, 0.0)).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn condensate_plaquette_is_product_of_norms(n in 1usize..4, seed in any::<u64>(), mu in 0usize..3, nu in 0usize..3, site in 0usize..27) {
        prop_assume!(mu != nu);
        let (mu, nu) = (mu.min(nu), mu.max(nu));
        let geo = LatticeGeometry::new(&[3, 3, 3]).unwrap();
        let mut rng = rng_stream(seed);
        let phi = SiteVector::<f64>::random(n, geo.volume(), &mut rng);
        let p = geo.plaquette(site, mu, nu).unwrap();
        let tr = condensate_plaquette_trace(&geo, &phi, p);
        let corners = [
            site,
            geo.forward(site, mu),
            geo.forward(geo.forward(site, mu), nu),
            geo.forward(site, nu),
        ];
        let want: f64 = corners.iter().map(|&x| phi.norm_sqr(x)).product();
        prop_assert!((tr.re - want).abs() <= 1e-10 * want.max(1.0));
        prop_assert!(tr.im.abs() <= 1e-10 * want.max(1.0));

        let alphas: Vec<f64> = (0..geo.volume()).map(|i| (i as f64 * 1.7 + seed as f64).sin() * PI).collect();
        let rotated = condensate_plaquette_trace(&geo, &phi.rotate_phases(&alphas), p);
        prop_assert!((rotated - tr).norm() <= 1e-10 * want.max(1.0));
    }
}
