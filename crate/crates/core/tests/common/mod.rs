// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use boolclone_core::{BoolFn, MinorMap, Point};
use proptest::prelude::*;

pub fn boolfn(arity: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BoolFn> {
    arity.prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), 1 << n)
            .prop_map(move |v| BoolFn::from_values(n, &v).unwrap())
    })
}

/// A map out of `source` variables into `1..=max_target` variables.
pub fn minor_map(source: usize, max_target: usize) -> impl Strategy<Value = MinorMap> {
    (1..=max_target).prop_flat_map(move |m| {
        proptest::collection::vec(0..m, source).prop_map(move |v| MinorMap::new(v, m).unwrap())
    })
}

pub fn point(n: usize) -> impl Strategy<Value = Point> {
    proptest::collection::vec(any::<bool>(), n).prop_map(Point::new)
}

/// `f(g_0(x), ..., g_{n-1}(x))`.
pub fn compose(f: &BoolFn, gs: &[BoolFn]) -> BoolFn {
    let m = gs[0].arity();
    BoolFn::from_fn(m, |x| {
        let idx = gs.iter().fold(0usize, |acc, g| acc << 1 | g.value(x) as usize);
        f.value(idx)
    })
    .unwrap()
}
