use proptest::prelude::*;

use relhyp::conedoff::dist_hat_exact;
use relhyp::metric::{dist_exact, geodesic_exact};
use relhyp::peripheral::{cosets_through, gate_projection, separating_cosets};
use relhyp::presets::{c2c3, zxz2};
use relhyp::verify::sample::Sampler;
use relhyp::verify::{distance_formula, Space};
use relhyp::{Element, GroupSpec};

fn groups() -> [GroupSpec; 2] {
    [c2c3(), zxz2()]
}

fn triple(spec: &GroupSpec, seed: u64) -> [Element; 3] {
    let mut s = Sampler::new(seed);
    [s.element(spec, 6, 5), s.element(spec, 6, 5), s.element(spec, 6, 5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_laws(seed in any::<u64>()) {
        for g in groups() {
            let [x, y, z] = triple(&g, seed);
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert!(g.mul(&x, &g.inv(&x)).is_identity());
            prop_assert_eq!(g.parse(&g.format(&x)).unwrap(), x.clone());
            prop_assert_eq!(g.between(&x, &y), g.mul(&g.inv(&x), &y));
        }
    }

    #[test]
    fn word_metric_is_a_left_invariant_metric(seed in any::<u64>()) {
        for g in groups() {
            let [x, y, z] = triple(&g, seed);
            let d = |a: &Element, b: &Element| dist_exact(&g, a, b).unwrap();
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
            prop_assert_eq!(d(&g.mul(&z, &x), &g.mul(&z, &y)), d(&x, &y));
            prop_assert_eq!(d(&x, &y) == 0, x == y);
            prop_assert_eq!(geodesic_exact(&g, &x, &y).unwrap().len() as u32, d(&x, &y));
        }
    }

    #[test]
    fn coned_off_metric_is_dominated(seed in any::<u64>()) {
        for g in groups() {
            let [x, y, z] = triple(&g, seed);
            let h = |a: &Element, b: &Element| dist_hat_exact(&g, a, b).unwrap();
            prop_assert!(h(&x, &y) <= dist_exact(&g, &x, &y).unwrap());
            prop_assert!(h(&x, &z) <= h(&x, &y) + h(&y, &z));
            prop_assert_eq!(h(&x, &y), h(&y, &x));
        }
    }

    #[test]
    fn gate_is_a_nearest_point(seed in any::<u64>()) {
        for g in groups() {
            let [x, y, _] = triple(&g, seed);
            let mut s = Sampler::new(seed ^ 1);
            for p in cosets_through(&g, &y) {
                let pi = gate_projection(&g, &p, &x).unwrap().point;
                prop_assert!(p.contains(&pi));
                prop_assert_eq!(gate_projection(&g, &p, &pi).unwrap().point, pi.clone());
                let other = p.point(&g, &g.element_of_factor(p.factor, s.factor_element(g.factor(p.factor), 6)).unwrap());
                let (dx, dpi) = (dist_exact(&g, &x, &pi).unwrap(), dist_exact(&g, &pi, &other).unwrap());
                prop_assert_eq!(dist_exact(&g, &x, &other).unwrap(), dx + dpi);
            }
        }
    }

    #[test]
    fn only_separating_cosets_have_projection_gaps(seed in any::<u64>()) {
        let g = zxz2();
        let [x, y, z] = triple(&g, seed);
        let sep = separating_cosets(&g, &x, &y);
        for p in cosets_through(&g, &z).into_iter().chain(sep.iter().cloned()) {
            let (a, b) = (gate_projection(&g, &p, &x).unwrap().point, gate_projection(&g, &p, &y).unwrap().point);
            prop_assert_eq!(a != b, sep.contains(&p));
        }
    }

    #[test]
    fn formula_right_side_is_monotone(seed in any::<u64>()) {
        let g = zxz2();
        let space = Space::exact(&g).unwrap();
        let [x, y, _] = triple(&g, seed);
        let e = distance_formula(&space, &x, &y, &[0, 1, 2, 4, 8, 16], 0, Some((1, 1))).unwrap();
        prop_assert!(e.rhs.windows(2).all(|w| w[0].1 >= w[1].1));
        prop_assert!(e.rhs.iter().all(|&(_, r)| r >= e.dhat as u64));
        prop_assert!(e.dhat <= e.lhs);
        prop_assert!(e.estimate.unwrap().holds);
    }
}
