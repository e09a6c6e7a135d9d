// SPDX-License-Identifier: Apache-2.0

mod common;

use boolclone_core::boolfn::all_functions;
use boolclone_core::report::parse_fn;
use boolclone_core::{BoolFn, Point};
use common::{boolfn, minor_map};
use proptest::prelude::*;

#[test]
fn involutions_on_small_functions() {
    for n in 1..=3 {
        for f in all_functions(n).unwrap() {
            assert_eq!(f.dual().dual(), f);
            assert_eq!(f.negate().negate(), f);
            for u in 0..1usize << n {
                let u = Point::from_index(u, n);
                assert_eq!(f.shift(&u).unwrap().shift(&u).unwrap(), f);
            }
        }
    }
}

proptest! {
    #[test]
    fn point_index_round_trip(n in 1usize..=8, idx in 0usize..256) {
        let idx = idx % (1 << n);
        let p = Point::from_index(idx, n);
        prop_assert_eq!(p.index(), idx);
        prop_assert_eq!(Point::new(p.bits().to_vec()), p);
    }

    #[test]
    fn text_round_trip(f in boolfn(1..=8)) {
        prop_assert_eq!(parse_fn(&f.to_string()).unwrap(), f.clone());
        prop_assert_eq!(parse_fn(&f.to_string().to_lowercase()).unwrap(), f);
    }

    #[test]
    fn minor_composition(
        (g, s, t) in boolfn(1..=4).prop_flat_map(|g| {
            let n = g.arity();
            (Just(g), minor_map(n, 4)).prop_flat_map(|(g, s)| {
                let m = s.target_arity();
                (Just(g), Just(s), minor_map(m, 4))
            })
        })
    ) {
        let stepwise = g.minor(&s).unwrap().minor(&t).unwrap();
        prop_assert_eq!(stepwise, g.minor(&s.compose(&t).unwrap()).unwrap());
    }

    #[test]
    fn essential_variables_bounded_by_image(
        (g, s) in boolfn(1..=4).prop_flat_map(|g| { let n = g.arity(); (Just(g), minor_map(n, 4)) })
    ) {
        let image: std::collections::BTreeSet<usize> = s.as_slice().iter().copied().collect();
        let h = g.minor(&s).unwrap();
        prop_assert!(h.essential_variables().len() <= image.len());
        prop_assert!(h.essential_variables().iter().all(|v| image.contains(v)));
    }

    #[test]
    fn minor_relation_reflexive_and_transitive(
        (f, s, t) in boolfn(1..=3).prop_flat_map(|f| {
            let n = f.arity();
            (Just(f), minor_map(n, 3)).prop_flat_map(|(f, s)| {
                let m = s.target_arity();
                (Just(f), Just(s), minor_map(m, 3))
            })
        })
    ) {
        let budget = 1_000_000;
        prop_assert!(f.is_minor_of(&f, budget).unwrap());
        let g = f.minor(&s).unwrap();
        let h = g.minor(&t).unwrap();
        prop_assert!(g.is_minor_of(&f, budget).unwrap());
        prop_assert!(h.is_minor_of(&g, budget).unwrap());
        prop_assert!(h.is_minor_of(&f, budget).unwrap());
    }

    #[test]
    fn dual_commutes_with_minors(
        (f, s) in boolfn(1..=4).prop_flat_map(|f| { let n = f.arity(); (Just(f), minor_map(n, 4)) })
    ) {
        prop_assert_eq!(f.dual().minor(&s).unwrap(), f.minor(&s).unwrap().dual());
    }

    #[test]
    fn canonical_form_is_a_class_invariant(f in boolfn(1..=3)) {
        let c = f.canonical_form();
        prop_assert!(c.is_equivalent(&f));
        prop_assert_eq!(c.canonical_form(), c.clone());
        // Permuting variables keeps the class.
        let n = f.arity();
        let rev = boolclone_core::MinorMap::new((0..n).rev().collect(), n).unwrap();
        prop_assert_eq!(f.minor(&rev).unwrap().canonical_form(), c);
    }
}

#[test]
fn parse_rejects_bad_text() {
    for bad in ["", "2", "2:", "0:1", "2:G1", "2:88", "x:8", "3:E"] {
        assert!(BoolFn::parse(bad).is_err(), "{bad}");
    }
}
