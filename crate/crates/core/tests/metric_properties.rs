mod common;

use common::*;
use curveset::geometry::{Curve, GeomObject, Point, PointSet};
use curveset::metrics::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn curve_strategy(max_len: usize) -> impl Strategy<Value = Curve> {
    prop::collection::vec(prop::array::uniform2(-10.0f64..10.0), 1..=max_len)
        .prop_map(|v| Curve::new(v.into_iter().map(|c| Point::new(c.to_vec()).unwrap()).collect()).unwrap())
}

fn set_strategy(max_len: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::array::uniform2(-10.0f64..10.0), 1..=max_len)
        .prop_map(|v| PointSet::new(v.into_iter().map(|c| Point::new(c.to_vec()).unwrap()).collect()).unwrap())
}

fn lb(a: &Curve, b: &Curve) -> f64 {
    let (p, q) = (a.vertices(), b.vertices());
    euclid(p[0].coords(), q[0].coords()).max(euclid(p[p.len() - 1].coords(), q[q.len() - 1].coords()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn discrete_matches_enumeration(a in curve_strategy(5), b in curve_strategy(5)) {
        let d = discrete_frechet(&a, &b).unwrap();
        prop_assert!((d - brute_discrete_frechet(a.vertices(), b.vertices())).abs() <= 1e-12);
    }

    #[test]
    fn hausdorff_matches_enumeration(a in set_strategy(5), b in set_strategy(5)) {
        let d = hausdorff(&a, &b).unwrap();
        prop_assert!((d - brute_hausdorff(a.points(), b.points())).abs() <= 1e-12);
    }

    #[test]
    fn frechet_ordering_and_symmetry(a in curve_strategy(6), b in curve_strategy(6)) {
        let tol = FrechetTolerance::default();
        let c = continuous_frechet(&a, &b, tol).unwrap();
        let c2 = continuous_frechet(&b, &a, tol).unwrap();
        let slack = 2.0 * (tol.relative * c + tol.absolute);
        prop_assert!((c - c2).abs() <= slack, "{} vs {}", c, c2);
        prop_assert!(lb(&a, &b) <= c + slack);
        prop_assert!(c <= discrete_frechet(&a, &b).unwrap() + slack);
        prop_assert_eq!(discrete_frechet(&a, &b).unwrap(), discrete_frechet(&b, &a).unwrap());
    }

    #[test]
    fn triangle_inequality(a in curve_strategy(5), b in curve_strategy(5), c in curve_strategy(5),
                           x in set_strategy(5), y in set_strategy(5), z in set_strategy(5)) {
        let tol = FrechetTolerance::default();
        let (a, b, c) = (GeomObject::Curve(a), GeomObject::Curve(b), GeomObject::Curve(c));
        for kind in [MetricKind::DiscreteFrechet, MetricKind::ContinuousFrechet] {
            let ab = distance(kind, &a, &b, tol).unwrap();
            let bc = distance(kind, &b, &c, tol).unwrap();
            let ac = distance(kind, &a, &c, tol).unwrap();
            let slack = 2.0 * (tol.relative * (ab + bc) + tol.absolute) + 1e-12;
            prop_assert!(ac <= ab + bc + slack, "{}: {} > {} + {}", kind, ac, ab, bc);
        }
        let (x, y, z) = (GeomObject::PointSet(x), GeomObject::PointSet(y), GeomObject::PointSet(z));
        let h = |p: &GeomObject, q: &GeomObject| distance(MetricKind::Hausdorff, p, q, tol).unwrap();
        prop_assert!(h(&x, &z) <= h(&x, &y) + h(&y, &z) + 1e-12);
        prop_assert_eq!(h(&x, &y), h(&y, &x));
    }

    #[test]
    fn decision_is_monotone(a in curve_strategy(6), b in curve_strategy(6)) {
        let ub = discrete_frechet(&a, &b).unwrap();
        let mut seen_true = false;
        for i in 0..=30 {
            let r = ub * 1.2 * i as f64 / 30.0;
            let ok = continuous_frechet_decision(&a, &b, r).unwrap();
            prop_assert!(!(seen_true && !ok), "decision flipped back at r={}", r);
            seen_true |= ok;
        }
        prop_assert!(seen_true);
    }

    #[test]
    fn value_brackets_decision(a in curve_strategy(6), b in curve_strategy(6)) {
        let tol = FrechetTolerance::default();
        let v = continuous_frechet(&a, &b, tol).unwrap();
        prop_assert!(continuous_frechet_decision(&a, &b, v * (1.0 + tol.relative) + tol.absolute).unwrap());
        let below = v * (1.0 - tol.relative) - tol.absolute;
        if below >= 0.0 {
            prop_assert!(!continuous_frechet_decision(&a, &b, below).unwrap());
        }
    }
}

#[test]
fn translates_have_frechet_distance_equal_to_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let tol = FrechetTolerance::default();
    for _ in 0..50 {
        let c = random_curve(&mut rng, 7, 10.0);
        let v: [f64; 2] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let t = translate(&c, &v);
        let d = continuous_frechet(&c, &t, tol).unwrap();
        assert!((d - norm).abs() <= 1e-9 * norm + 1e-12, "{d} vs {norm}");
        assert!(!continuous_frechet_decision(&c, &t, norm * (1.0 - 1e-6)).unwrap());
    }
}

#[test]
fn dispatch_delegates() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tol = FrechetTolerance::default();
    let (s1, s2) = (point_set(&mut rng, 5, 3.0), point_set(&mut rng, 5, 3.0));
    let d = distance(MetricKind::Hausdorff, &s1.clone().into(), &s2.clone().into(), tol).unwrap();
    assert_eq!(d, hausdorff(&s1, &s2).unwrap());
    let c: GeomObject = random_curve(&mut rng, 5, 3.0).into();
    assert_eq!(distance(MetricKind::DiscreteFrechet, &c, &c, tol).unwrap(), 0.0);
}
