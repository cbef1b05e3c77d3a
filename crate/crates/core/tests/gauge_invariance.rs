use std::sync::Arc;

use lattice_gauge::lattice::Orientation;
use lattice_gauge::rng::rng_stream;
use lattice_gauge::wilson::random_gauge_transform;
use lattice_gauge::{GaugeConfiguration, GroupElement, GroupLabel, LatticeGeometry, LinkIndex};
use proptest::prelude::*;

fn geometry() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        prop::collection::vec(2usize..5, 2),
        prop::collection::vec(2usize..4, 3),
        prop::collection::vec(2usize..4, 4),
    ]
}

fn group() -> impl Strategy<Value = GroupLabel> {
    prop_oneof![Just(GroupLabel::U1), Just(GroupLabel::SU2), Just(GroupLabel::SU3)]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn observables_are_gauge_invariant(extents in geometry(), g in group(), seed in any::<u64>()) {
        let geo = Arc::new(LatticeGeometry::new(&extents).unwrap());
        let mut rng = rng_stream(seed);
        let cfg = GaugeConfiguration::<f64>::hot(geo.clone(), g, &mut rng);
        let t = random_gauge_transform(&geo, g, &mut rng);
        let tc = cfg.gauge_transform(&t).unwrap();
        prop_assert!(rel(cfg.action(), tc.action()) <= 1e-10);
        prop_assert!(rel(cfg.average_plaquette(), tc.average_plaquette()) <= 1e-10);
        let (p, q) = (cfg.polyakov_loop(), tc.polyakov_loop());
        prop_assert!((p - q).norm() / p.norm().max(1.0) <= 1e-10);
    }

    #[test]
    fn temporal_gauge_sets_time_links_to_identity(extents in geometry(), g in group(), seed in any::<u64>()) {
        let geo = Arc::new(LatticeGeometry::new(&extents).unwrap());
        let cfg = GaugeConfiguration::<f64>::hot(geo.clone(), g, &mut rng_stream(seed));
        let fixed = cfg.temporal_gauge_fix();
        let t = geo.time_dir();
        let id = GroupElement::<f64>::identity(g);
        for x in geo.sites().filter(|&x| geo.coord(x, t) + 1 < geo.extent(t)) {
            let u = fixed.link(LinkIndex { site: x, dir: t });
            prop_assert!(u.matrix().max_abs_diff(id.matrix()) <= 1e-10);
        }
        prop_assert!(rel(cfg.action(), fixed.action()) <= 1e-10);
        prop_assert!((cfg.polyakov_loop() - fixed.polyakov_loop()).norm() <= 1e-10);
    }

    #[test]
    fn closed_loop_traces_are_invariant(g in group(), seed in any::<u64>(), steps in prop::collection::vec((0usize..3, any::<bool>()), 1..12)) {
        let geo = Arc::new(LatticeGeometry::new(&[3, 3, 3]).unwrap());
        let mut rng = rng_stream(seed);
        let cfg = GaugeConfiguration::<f64>::hot(geo.clone(), g, &mut rng);
        // close the random walk by retracing it backwards
        let mut path: Vec<(usize, Orientation)> = steps
            .iter()
            .map(|&(d, f)| (d, if f { Orientation::Forward } else { Orientation::Backward }))
            .collect();
        let back: Vec<_> = path.iter().rev().map(|&(d, o)| (d, match o {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        })).collect();
        // insert a plaquette in the middle so the loop is not trivially the identity
        path.extend([(0, Orientation::Forward), (1, Orientation::Forward), (0, Orientation::Backward), (1, Orientation::Backward)]);
        path.extend(back);
        let t = random_gauge_transform(&geo, g, &mut rng);
        let tc = cfg.gauge_transform(&t).unwrap();
        let a = cfg.path_product(5, &path).trace();
        let b = tc.path_product(5, &path).trace();
        prop_assert!((a - b).norm() <= 1e-10);
    }
}
