// SPDX-License-Identifier: Apache-2.0

mod common;

use boolclone_core::asummability::{equal_sums_witness, preserves_b_fast};
use boolclone_core::boolfn::all_functions;
use boolclone_core::clones::is_member;
use boolclone_core::constraints::{all_violations, make_b};
use boolclone_core::constructions::{
    g_mc, g_mc_winf, g_s, g_uinf, transport_witness_down_gs, transport_witness_up, validate_b_violation,
    ConstructionTag,
};
use common::boolfn;
use proptest::prelude::*;

const BUDGET: u128 = 100_000_000;

#[test]
fn targets_and_equivalence_up_to_arity_two() {
    for f in (1..=2).flat_map(|n| all_functions(n).unwrap()) {
        for tag in ConstructionTag::ALL {
            let g = tag.apply(&f).unwrap();
            assert_eq!(g.arity(), tag.target_arity(f.arity()));
            assert!(is_member(&g, tag.target()), "{tag}({f})");
        }
        for g in [g_s(&f).unwrap(), g_mc(&f).unwrap(), g_uinf(&f).unwrap()] {
            for ell in [2, 3] {
                assert_eq!(
                    preserves_b_fast(&f, ell, BUDGET).unwrap(),
                    preserves_b_fast(&g, ell, BUDGET).unwrap(),
                    "{f} -> {g}, l = {ell}"
                );
            }
        }
        assert_eq!(g_mc_winf(&f).unwrap(), g_uinf(&g_mc(&f).unwrap()).unwrap().dual());
    }
}

#[test]
fn every_gs_violation_transports_down() {
    let q = make_b(2).unwrap();
    for f in all_functions(2).unwrap() {
        let g = g_s(&f).unwrap();
        for m in all_violations(&g, &q, BUDGET).unwrap() {
            let down = transport_witness_down_gs(&m, &f, 2).unwrap();
            validate_b_violation(&down, &f, 2).unwrap();
        }
    }
}

proptest! {
    #[test]
    fn transported_witnesses_revalidate(f in boolfn(1..=4), ell in 2usize..=3) {
        if let Some(w) = equal_sums_witness(&f, ell, BUDGET).unwrap() {
            for tag in ConstructionTag::ALL {
                let up = transport_witness_up(&w, &f, tag).unwrap();
                let g = tag.apply(&f).unwrap();
                prop_assert!(up.validate(&g).is_ok());
                prop_assert!(validate_b_violation(&up.to_violation_matrix(), &g, ell).is_ok());
            }
            let g = g_s(&f).unwrap();
            let up = transport_witness_up(&w, &f, ConstructionTag::Gs).unwrap();
            let down = transport_witness_down_gs(&up.to_violation_matrix(), &f, ell).unwrap();
            prop_assert!(validate_b_violation(&down, &f, ell).is_ok());
            prop_assert_eq!(g.arity(), f.arity() + 1);
        }
    }
}
