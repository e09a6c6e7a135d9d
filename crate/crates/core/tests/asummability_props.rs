// SPDX-License-Identifier: Apache-2.0

mod common;

use boolclone_core::asummability::{equal_sums_witness, preserves_b_fast, witness_violates_b};
use common::{boolfn, point};
use proptest::prelude::*;

const BUDGET: u128 = 100_000_000;

proptest! {
    #[test]
    fn invariant_under_dual_negation_and_shift(
        (f, u) in boolfn(1..=4).prop_flat_map(|f| { let n = f.arity(); (Just(f), point(n)) })
    ) {
        for ell in [2, 3] {
            let p = preserves_b_fast(&f, ell, BUDGET).unwrap();
            prop_assert_eq!(preserves_b_fast(&f.dual(), ell, BUDGET).unwrap(), p);
            prop_assert_eq!(preserves_b_fast(&f.negate(), ell, BUDGET).unwrap(), p);
            prop_assert_eq!(preserves_b_fast(&f.shift(&u).unwrap(), ell, BUDGET).unwrap(), p);
        }
    }

    #[test]
    fn divisors_inherit_preservation(f in boolfn(1..=4)) {
        if preserves_b_fast(&f, 4, BUDGET).unwrap() {
            prop_assert!(preserves_b_fast(&f, 2, BUDGET).unwrap());
        }
        if preserves_b_fast(&f, 6, BUDGET).unwrap() {
            prop_assert!(preserves_b_fast(&f, 2, BUDGET).unwrap());
            prop_assert!(preserves_b_fast(&f, 3, BUDGET).unwrap());
        }
    }

    #[test]
    fn witnesses_revalidate(f in boolfn(1..=5), ell in 2usize..=4) {
        if let Some(w) = equal_sums_witness(&f, ell, BUDGET).unwrap() {
            prop_assert_eq!(w.ell(), ell);
            prop_assert!(w.validate(&f).is_ok());
            prop_assert!(witness_violates_b(&w, &f).is_ok());
            let mut s = vec![0usize; f.arity()];
            for p in w.false_points() {
                prop_assert!(!f.eval(p).unwrap());
                for (acc, &b) in s.iter_mut().zip(p.bits()) { *acc += b as usize; }
            }
            let mut t = vec![0usize; f.arity()];
            for p in w.true_points() {
                prop_assert!(f.eval(p).unwrap());
                for (acc, &b) in t.iter_mut().zip(p.bits()) { *acc += b as usize; }
            }
            prop_assert_eq!(s, t);
        }
    }
}
