use proptest::prelude::*;
use teich_core::boundary::{axes_intersect, boundary_samples, cross_ratio_norm};
use teich_core::marked_group::{
    enumerate_words, punctured_torus, EnumerationMode, TorusRoot, DEFAULT_BUDGET,
};
use teich_core::spectra::{delta_l, rho_l, SearchOptions};
use teich_core::{
    ExtendedReal, IsometryClass, MarkedGroup, MarkedIsomorphism, MoebiusMap, Tolerances, Word,
};

fn unimodular() -> impl Strategy<Value = MoebiusMap> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, any::<bool>())
        .prop_filter("a bounded away from 0", |(a, ..)| a.abs() > 0.1)
        .prop_map(|(a, b, c, flip)| {
            let s = if flip { -1.0 } else { 1.0 };
            MoebiusMap::new(s * a, s * b, s * c, s * (1.0 + b * c) / a).unwrap()
        })
}

fn hyperbolic_or_parabolic() -> impl Strategy<Value = MoebiusMap> {
    let point = -5.0..5.0f64;
    prop_oneof![
        (1.1..20.0f64, point.clone(), point.clone())
            .prop_filter("distinct fixed points", |(_, p, n)| (p - n).abs() > 0.05)
            .prop_map(|(l, p, n)| MoebiusMap::hyperbolic(l, p.into(), n.into()).unwrap()),
        (0.2..5.0f64, any::<bool>(), point).prop_map(|(w, neg, p)| MoebiusMap::parabolic(
            if neg { -w } else { w },
            p.into()
        )
        .unwrap()),
    ]
}

fn torus_pair() -> impl Strategy<Value = (MarkedGroup, MarkedGroup)> {
    (2.9..6.0f64, 2.9..6.0f64, 2.9..6.0f64, 2.9..6.0f64).prop_map(|(x1, y1, x2, y2)| {
        (
            punctured_torus(x1, y1, TorusRoot::Plus).unwrap(),
            punctured_torus(x2, y2, TorusRoot::Plus).unwrap(),
        )
    })
}

fn iso(pair: &(MarkedGroup, MarkedGroup)) -> MarkedIsomorphism {
    MarkedIsomorphism::new(pair.0.clone(), pair.1.clone(), &Tolerances::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(f in unimodular(), g in unimodular(), h in unimodular()) {
        let left = f.compose(&g).compose(&h);
        let right = f.compose(&g.compose(&h));
        prop_assert!(left.approx_eq(&right, 1e-10), "{left:?} vs {right:?}");
    }

    #[test]
    fn conjugation_keeps_type_and_multiplier(g in hyperbolic_or_parabolic(), h in unimodular()) {
        let tol = Tolerances::default();
        let (a, b) = (g.classify_with(&tol).unwrap(), g.conjugate(&h).classify_with(&tol).unwrap());
        prop_assert_eq!(a.kind(), b.kind());
        prop_assert!(rel(b.lambda(), a.lambda()) <= 1e-9);
    }

    #[test]
    fn fixed_points_move_with_conjugation(g in hyperbolic_or_parabolic(), h in unimodular()) {
        // h⁻¹ g h fixes h⁻¹(P(g)).
        let tol = Tolerances::default();
        let moved = g.conjugate(&h).classify_with(&tol).unwrap().attracting().unwrap();
        let expected = h.inverse().apply(g.classify_with(&tol).unwrap().attracting().unwrap());
        let close = match (moved, expected) {
            (ExtendedReal::Finite(p), ExtendedReal::Finite(q)) => (p - q).abs() <= 1e-6 * q.abs().max(1.0),
            (ExtendedReal::Finite(p), ExtendedReal::Infinity) | (ExtendedReal::Infinity, ExtendedReal::Finite(p)) => p.abs() > 1e6,
            _ => true,
        };
        prop_assert!(close, "{moved} vs {expected}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn axis_test_is_symmetric_and_conjugation_invariant(
        g1 in hyperbolic_or_parabolic(),
        g2 in hyperbolic_or_parabolic(),
        h in unimodular(),
    ) {
        let tol = Tolerances::default();
        let (c1, c2) = (g1.classify_with(&tol).unwrap(), g2.classify_with(&tol).unwrap());
        let meets = axes_intersect(&c1, &c2, &tol).unwrap();
        prop_assert_eq!(meets, axes_intersect(&c2, &c1, &tol).unwrap());
        // Shared endpoints are decided by a tolerance that conjugation
        // does not preserve; only test generic configurations.
        let generic = |c: &IsometryClass| [c.attracting(), c.repelling()].into_iter().flatten().collect::<Vec<_>>();
        let (e1, e2) = (generic(&c1), generic(&c2));
        prop_assume!(e1.iter().all(|p| e2.iter().all(|q| !p.approx_eq(*q, 1e-3))));
        let (d1, d2) = (
            g1.conjugate(&h).classify_with(&tol).unwrap(),
            g2.conjugate(&h).classify_with(&tol).unwrap(),
        );
        prop_assert_eq!(meets, axes_intersect(&d1, &d2, &tol).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_is_monotone_in_cutoff_and_reciprocal(pair in torus_pair()) {
        let iso = iso(&pair);
        let forward = delta_l(&iso, &SearchOptions::new(5)).unwrap();
        prop_assert!(forward.trace.windows(2).all(|w| w[0].value <= w[1].value));
        let backward = delta_l(&iso.inverse(), &SearchOptions::new(5)).unwrap();
        prop_assert!(forward.value * backward.value >= 1.0 - 1e-12);
    }

    #[test]
    fn estimates_ignore_translating_the_target(pair in torus_pair(), b in -3.0..3.0f64) {
        let iso = iso(&pair);
        let shifted = iso.with_target(pair.1.conjugated(&MoebiusMap::translation(b)));
        let opts = SearchOptions::new(4).with_depth(6);
        let (d, ds) = (delta_l(&iso, &opts).unwrap(), delta_l(&shifted, &opts).unwrap());
        prop_assert!((d.value - ds.value).abs() <= 1e-9);
        let (r, rs) = (rho_l(&iso, &opts).unwrap(), rho_l(&shifted, &opts).unwrap());
        prop_assert!((r.value - rs.value).abs() <= 1e-9 * r.value, "{} vs {}", r.value, rs.value);
    }

    #[test]
    fn identity_pair_has_exponent_one(pair in torus_pair()) {
        let same = MarkedIsomorphism::identity(pair.0.clone());
        let opts = SearchOptions::new(4).with_depth(6);
        prop_assert_eq!(delta_l(&same, &opts).unwrap().value, 1.0);
        prop_assert_eq!(rho_l(&same, &opts).unwrap().value, 1.0);
    }

    #[test]
    fn normalizing_keeps_traces_and_multipliers(pair in torus_pair(), h in unimodular()) {
        let tol = Tolerances::default();
        let group = &pair.0;
        let moved = group.conjugated(&h).normalize(&tol).unwrap();
        // A product peripheral can only land on 1 to the last few bits.
        let omega = moved.first_peripheral_omega(&tol).unwrap();
        prop_assert!((omega - 1.0).abs() <= 4.0 * f64::EPSILON, "{omega}");
        for w in enumerate_words(2, 6, EnumerationMode::All, DEFAULT_BUDGET).unwrap() {
            let (a, b) = (group.evaluate(&w), moved.evaluate(&w));
            prop_assert!(rel(b.trace(), a.trace().max(1.0)) <= 1e-9, "{w}: tr {} vs {}", b.trace(), a.trace());
            let (a, b) = (a.classify_with(&tol).unwrap(), b.classify_with(&tol).unwrap());
            prop_assert_eq!(a.kind(), b.kind(), "{}", w);
            prop_assert!(rel(b.lambda(), a.lambda()) <= 1e-9, "{w}: {} vs {}", b.lambda(), a.lambda());
        }
    }

    #[test]
    fn boundary_map_is_equivariant(pair in torus_pair(), g in prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 1..4)) {
        // P(g w g⁻¹) = g(P(w)) on both sides, so φ(g(x)) = j(g)(φ(x)).
        let tol = Tolerances::default();
        let iso = iso(&pair);
        let g = Word::new(g).unwrap();
        for w in [Word::new([1]).unwrap(), Word::new([1, -2]).unwrap(), Word::new([2, 2, 1]).unwrap()] {
            let conj = g.conjugate_by(&w);
            for (group, side) in [(iso.source(), "source"), (iso.target(), "target")] {
                let lhs = group.evaluate(&conj).classify_with(&tol).unwrap().attracting().unwrap();
                let rhs = group.evaluate(&g).apply(group.evaluate(&w).classify_with(&tol).unwrap().attracting().unwrap());
                prop_assert!(lhs.approx_eq(rhs, 1e-7 * rhs.finite().map_or(1.0, |x| x.abs().max(1.0))), "{side}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn seeded_norms_repeat(pair in torus_pair(), seed in any::<u64>()) {
        let tol = Tolerances::default();
        let iso = iso(&pair);
        let samples = boundary_samples(&iso, 5, &tol).unwrap();
        let a = cross_ratio_norm(&iso, &samples, 300, seed, &tol).unwrap();
        let b = cross_ratio_norm(&iso, &samples, 300, seed, &tol).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.ls_norm_lb <= a.cr_norm_lb + 1e-9);
    }
}
