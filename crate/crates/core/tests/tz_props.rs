// SPDX-License-Identifier: Apache-2.0

use boolclone_core::asummability::{equal_sums_witness, DEFAULT_MULTISET_BUDGET};
use boolclone_core::tz::{a_matrix, build_tz, phi, tz_preserves_b, verify_dot_classification, SquareMatrix};
use num_bigint::BigUint;

#[test]
fn phi_is_additive_without_carries() {
    let k = 3;
    let inst = build_tz(k, None).unwrap();
    let cells: Vec<SquareMatrix> = (1..=k)
        .flat_map(|p| (1..=k).map(move |q| (p, q)))
        .map(|(p, q)| a_matrix(k, p, q).unwrap())
        .collect();
    for s in 0u32..1 << 9 {
        let mut sum = SquareMatrix::constant(k, 0);
        let mut phis = BigUint::from(0u32);
        for (c, a) in cells.iter().enumerate() {
            if s >> c & 1 == 1 {
                sum = sum.add(a).unwrap();
                phis += phi(a, inst.base()).unwrap();
            }
        }
        assert_eq!(phi(&sum, inst.base()).unwrap(), phis, "subset {s:09b}");
    }
}

#[test]
fn f3_dot_products_and_monotonicity() {
    let inst = build_tz(3, None).unwrap();
    assert!(verify_dot_classification(&inst).unwrap());
    let f = inst.function().unwrap();
    for idx in 0..512usize {
        for i in 0..9 {
            assert!(!f.value(idx) || f.value(idx | 1 << i), "{idx:09b} bit {i}");
        }
    }
}

#[test]
fn f3_and_f4_are_incomparable() {
    let i3 = build_tz(3, None).unwrap();
    let i4 = build_tz(4, None).unwrap();
    let (f3, f4) = (i3.function().unwrap(), i4.function().unwrap());
    // Minors never gain essential variables, so f_4 is no minor of f_3.
    assert_eq!(f3.essential_variables().len(), 9);
    assert_eq!(f4.essential_variables().len(), 16);
    // Minors inherit B_3 preservation, so f_3 is no minor of f_4.
    assert!(equal_sums_witness(f3, 3, DEFAULT_MULTISET_BUDGET).unwrap().is_some());
    assert!(tz_preserves_b(&i4, 3, DEFAULT_MULTISET_BUDGET).unwrap().preserves);
}
