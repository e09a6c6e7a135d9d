// SPDX-License-Identifier: Apache-2.0

mod common;

use boolclone_core::boolfn::all_functions;
use boolclone_core::clones::{is_member, membership_crosscheck, CloneId, Rank, DEFAULT_RANK_BOUND};
use boolclone_core::threshold::is_threshold;
use boolclone_core::BoolFn;
use common::compose;
use proptest::prelude::*;

fn small_functions() -> Vec<BoolFn> {
    (1..=3).flat_map(|n| all_functions(n).unwrap()).collect()
}

#[test]
fn membership_agrees_with_characterizing_constraints() {
    let fs = small_functions();
    for c in CloneId::catalogue(DEFAULT_RANK_BOUND) {
        for f in &fs {
            membership_crosscheck(f, c, DEFAULT_RANK_BOUND, 100_000_000)
                .unwrap_or_else(|e| panic!("{c} {f}: {e}"));
        }
    }
}

#[test]
fn catalogue_contains_projections() {
    for c in CloneId::catalogue(DEFAULT_RANK_BOUND) {
        for n in 1..=3 {
            for i in 0..n {
                assert!(is_member(&BoolFn::projection(n, i).unwrap(), c), "{c}");
            }
        }
    }
}

#[test]
fn containments() {
    let inf = Rank::Infinite;
    for f in small_functions() {
        if is_member(&f, CloneId::SM) {
            assert!(is_member(&f, CloneId::S) && is_member(&f, CloneId::M));
        }
        if is_member(&f, CloneId::Mc) {
            assert!(is_member(&f, CloneId::M) && is_member(&f, CloneId::Tc));
        }
        if is_member(&f, CloneId::McU(inf)) {
            assert!(is_member(&f, CloneId::Mc) && is_member(&f, CloneId::U(inf)));
        }
    }
}

#[test]
fn conjunctions_and_disjunctions_are_threshold() {
    for f in small_functions() {
        if is_member(&f, CloneId::Lambda) || is_member(&f, CloneId::V) {
            assert!(is_threshold(&f).unwrap().is_some(), "{f}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// `f(g_1, ..., g_n)` stays in the clone when all parts do.
    #[test]
    fn closed_under_composition(c in 0usize..62, seeds in proptest::collection::vec(any::<u64>(), 4)) {
        let cat = CloneId::catalogue(DEFAULT_RANK_BOUND);
        let c = cat[c % cat.len()];
        let pick = |n: usize, s: u64| {
            let members: Vec<BoolFn> = all_functions(n).unwrap().into_iter().filter(|f| is_member(f, c)).collect();
            members[(s % members.len() as u64) as usize].clone()
        };
        let outer_arity = 2 + (seeds[0] % 2) as usize;
        let f = pick(outer_arity, seeds[0] >> 1);
        let gs: Vec<BoolFn> = (0..outer_arity).map(|i| pick(3, seeds[1 + i % 3] >> i)).collect();
        let h = compose(&f, &gs);
        prop_assert!(is_member(&h, c), "{} {}", c, h);
    }
}
