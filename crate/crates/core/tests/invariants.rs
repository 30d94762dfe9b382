use proptest::prelude::*;
use tropical_core::curve::{curve_graph, tree_check};
use tropical_core::geometry::{area, normalize};
use tropical_core::solver::solve_gp_state;
use tropical_core::*;

fn lattice_set(s: i64, max_n: usize) -> impl Strategy<Value = Vec<RPoint>> {
    prop::collection::btree_set((1..s, 1..s), 0..=max_n)
        .prop_map(move |set| set.into_iter().map(|(x, y)| RPoint::lattice(x, y, s)).collect())
}

fn interior_point() -> impl Strategy<Value = RPoint> {
    (1i64..200, 1i64..200).prop_map(|(x, y)| RPoint::lattice(x, y, 200))
}

/// Boundary sides plus extra monomials that are nonnegative on the square,
/// so the result vanishes on the boundary but need not be canonical.
fn raw_series() -> impl Strategy<Value = TropicalSeries> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 0i64..40, 1i64..20), 0..8).prop_map(|extra| {
        let mut f = TropicalSeries::plateau(Rational::from_integer(2));
        for (i, j, num, den) in extra {
            if f.contains(&Exponent::new(i, j)) {
                continue;
            }
            let lo = (-i).max(0) + (-j).max(0);
            let c = &Rational::from_integer(lo) + &Rational::new(num, den * 10);
            f.insert(Exponent::new(i, j), c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonicalize_is_idempotent_and_preserves_values(
        f in raw_series(),
        probes in prop::collection::vec(interior_point(), 100),
    ) {
        prop_assert!(boundary_zero_check(&f));
        let g = canonicalize(&f).unwrap();
        prop_assert_eq!(&canonicalize(&g).unwrap(), &g);
        for p in &probes {
            prop_assert_eq!(g.evaluate(p).unwrap(), f.evaluate(p).unwrap());
        }
    }

    #[test]
    fn faces_partition_the_square(f in raw_series()) {
        let arr = build_arrangement(&canonicalize(&f).unwrap()).unwrap();
        let total: Rational = arr.faces.iter().map(|face| area(&face.polygon)).sum();
        prop_assert_eq!(total, Rational::one());
        prop_assert_eq!(euler_characteristic(&arr), 2);
    }

    #[test]
    fn stored_coefficients_are_canonical(f in raw_series()) {
        let g = canonicalize(&f).unwrap();
        let arr = build_arrangement(&g).unwrap();
        for (e, c) in g.iter() {
            prop_assert_eq!(&arr.canonical_coefficient(e), c);
        }
    }

    #[test]
    fn exact_evaluation_matches_floating_point(
        f in raw_series(),
        probes in prop::collection::vec(interior_point(), 10),
    ) {
        for p in &probes {
            let (x, y) = p.to_f64();
            let approx = f
                .iter()
                .map(|(e, c)| c.to_f64() + e.i as f64 * x + e.j as f64 * y)
                .fold(f64::INFINITY, f64::min);
            prop_assert!((f.evaluate(p).unwrap().to_f64() - approx).abs() < 1e-9);
        }
    }

    #[test]
    fn every_shrink_keeps_boundary_and_raises(
        points in lattice_set(64, 6),
        probes in prop::collection::vec(interior_point(), 100),
    ) {
        let mut state = GpState::zero();
        for _pass in 0..default_max_passes(points.len()) {
            let mut changed = false;
            for p in &points {
                let before = state.series().clone();
                let out = state.shrink(p).unwrap();
                let after = state.series();
                prop_assert!(boundary_zero_check(after));
                prop_assert!(after.is_on_curve(p).unwrap());
                prop_assert_eq!(out.raise_amount.is_positive(), &before != after);
                for q in &probes {
                    prop_assert!(after.evaluate(q).unwrap() >= before.evaluate(q).unwrap());
                }
                changed |= out.raise_amount.is_positive();
            }
            if !changed {
                break;
            }
        }
    }

    #[test]
    fn solution_is_a_fixpoint(points in lattice_set(64, 8)) {
        let (state, trace) = solve_gp_state(&points, default_max_passes(points.len())).unwrap();
        let f = state.series().clone();
        prop_assert!(trace.total_shrinks >= points.len().min(1));
        for p in &points {
            prop_assert!(f.is_on_curve(p).unwrap());
        }
        let mut again = state.clone();
        for p in &points {
            prop_assert!(again.shrink(p).unwrap().raise_amount.is_zero());
        }
        prop_assert_eq!(&canonicalize(&f).unwrap(), &f);
        // Faces maintained incrementally agree with a rebuild from scratch.
        let inc: Vec<_> = state.arrangement().faces.iter()
            .map(|face| (face.exponent, normalize(&face.polygon))).collect();
        let full: Vec<_> = build_arrangement(&f).unwrap().faces.iter()
            .map(|face| (face.exponent, normalize(&face.polygon))).collect();
        prop_assert_eq!(inc, full);
    }

    #[test]
    fn sweep_order_does_not_matter(
        points in lattice_set(64, 6),
        perms in prop::collection::vec(any::<prop::sample::Index>(), 0..12),
    ) {
        let (f, _) = solve_gp(&points, default_max_passes(points.len())).unwrap();
        let mut q = points.clone();
        for (k, idx) in perms.iter().enumerate() {
            if q.len() > 1 {
                let a = k % q.len();
                let b = idx.index(q.len());
                q.swap(a, b);
            }
            let (g, _) = solve_gp(&q, default_max_passes(q.len())).unwrap();
            prop_assert_eq!(&g, &f);
        }
    }

    #[test]
    fn tree_implies_genus_equals_point_count(points in lattice_set(64, 8)) {
        let (f, _) = solve_gp(&points, default_max_passes(points.len())).unwrap();
        let arr = build_arrangement(&f).unwrap();
        let g = genus(&f).unwrap();
        prop_assert!(g <= arr.bounded_face_count());
        prop_assert!(g <= points.len());
        if is_generic_tree(&f, &points).unwrap() {
            prop_assert_eq!(g, points.len());
        }
        let graph = curve_graph(&f, &points).unwrap();
        prop_assert!(!tree_check(&graph).has_cycle || points.is_empty());
        prop_assert_eq!(euler_characteristic(&arr), 2);
    }
}
