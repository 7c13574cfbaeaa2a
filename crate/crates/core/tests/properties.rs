use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use endcircle::circular_order::CircularOrder;
use endcircle::completion_circle::{embed_circle, CirclePoint};
use endcircle::dynamics::PlaneMap;
use endcircle::generate;
use endcircle::plane_model::{find_arc, Cell, Scenario};
use endcircle::triad_order::ends_order;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The circular order of ends satisfies its own axioms and does not
    /// change when the whole scene is translated.
    #[test]
    fn end_order_is_translation_invariant(seed in 0u64..10_000, dx in -6i64..=6, dy in -6i64..=6) {
        let mut r = generate::rng(seed);
        let s = generate::random_scenario(&mut r, 4);
        let sys = ends_order(&s).unwrap();
        let report = sys.order.verify_axioms().unwrap();
        prop_assert!(report.antisymmetry_violations.is_empty());
        prop_assert!(report.cocycle_violations.is_empty());
        let moved = Scenario::new(s.continua().iter().map(|k| k.translate(dx, dy)).collect()).unwrap();
        let sys2 = ends_order(&moved).unwrap();
        let es = &sys.order.elements();
        for a in es.iter() {
            for b in es.iter() {
                for c in es.iter() {
                    if a != b && b != c && a != c {
                        prop_assert_eq!(sys.order.orient(a, b, c), sys2.order.orient(a, b, c));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Arcs between two continua are simple grid paths that stay clear of
    /// every continuum, start next to the source and stop next to the
    /// target, and come out the same on every call.
    #[test]
    fn arcs_are_valid_and_deterministic(seed in 0u64..10_000) {
        let mut r = generate::rng(seed);
        let triad = generate::random_triad(&mut r);
        let k = triad.continua()[0].clone();
        let m = triad.continua()[2].clone();
        let s = Scenario::new(vec![k.clone(), m.clone()]).unwrap();
        let arc = find_arc(&s, "a", "c", &BTreeSet::new()).unwrap();
        prop_assert!(!arc.cells.is_empty());
        for w in arc.cells.windows(2) {
            prop_assert!(w[0].is_adjacent(&w[1]));
        }
        for c in &arc.cells {
            prop_assert!(!k.contains(c) && !m.contains(c));
        }
        let first = arc.cells.first().unwrap();
        let last = arc.cells.last().unwrap();
        prop_assert!(first.neighbors4().iter().any(|n| k.contains(n)));
        prop_assert!(last.neighbors4().iter().any(|n| m.contains(n)));
        let again = find_arc(&s, "a", "c", &BTreeSet::new()).unwrap();
        prop_assert_eq!(arc.cells, again.cells);
    }

    /// Whatever insertion order is used, the embedding lands on distinct
    /// dyadic angles in the same circular arrangement as the source.
    #[test]
    fn embedding_survives_insertion_reordering(n in 3usize..=8, seed in 0u64..10_000) {
        let order = CircularOrder::from_cycle((0..n).collect()).unwrap();
        let mut insertion: Vec<usize> = (0..n).collect();
        insertion.shuffle(&mut generate::rng(seed));
        let emb = embed_circle(&order, &insertion).unwrap();
        let angles: BTreeSet<_> = emb.values().cloned().collect();
        prop_assert_eq!(angles.len(), n);
        prop_assert!(emb.values().all(|p| p.is_dyadic()));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c && a != c {
                        prop_assert_eq!(
                            order.orient(&a, &b, &c),
                            CirclePoint::orient(&emb[&a], &emb[&b], &emb[&c])
                        );
                    }
                }
            }
        }
    }

    /// Rigid plane maps form a group: inverses cancel and composition acts
    /// the way it should on cells.
    #[test]
    fn plane_maps_compose_like_a_group(
        q1 in 0u8..4, q2 in 0u8..4,
        t1 in (-9i64..=9, -9i64..=9), t2 in (-9i64..=9, -9i64..=9),
        x in -20i64..=20, y in -20i64..=20,
    ) {
        let f = PlaneMap::rotation(q1, Cell::new(t1.0, t1.1)).compose(&PlaneMap::translation(t2.0, t2.1));
        let g = PlaneMap::rotation(q2, Cell::new(t2.0, t2.1)).compose(&PlaneMap::translation(t1.0, t1.1));
        let c = Cell::new(x, y);
        prop_assert_eq!(f.compose(&g).apply(&c), f.apply(&g.apply(&c)));
        prop_assert_eq!(f.compose(&f.inverse()).apply(&c), c);
        prop_assert_eq!(f.inverse().apply(&f.apply(&c)), c);
        prop_assert_eq!(PlaneMap::rotation(0, Cell::new(5, -5)).apply(&c), c);
    }

    /// Generated circle maps hit their prescribed values at breakpoints
    /// and never reverse the circular order of sample points.
    #[test]
    fn circle_maps_interpolate_and_preserve_order(seed in 0u64..10_000) {
        let mut r = generate::rng(seed);
        let m = generate::random_pl_map(&mut r);
        for (x, y) in &m.breakpoints {
            prop_assert_eq!(&m.eval(x), y);
        }
        let pts: Vec<CirclePoint> = (0..24).map(|i| CirclePoint::from_ratio(i, 24)).collect();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for k in (j + 1)..pts.len() {
                    let (fa, fb, fc) = (m.eval(&pts[i]), m.eval(&pts[j]), m.eval(&pts[k]));
                    if fa != fb && fb != fc && fa != fc {
                        prop_assert_eq!(CirclePoint::orient(&fa, &fb, &fc), 1);
                    }
                }
            }
        }
    }
}
