// SPDX-License-Identifier: Apache-2.0

//! `B_ℓ` preservation through equal multiset sums.
//!
//! `f` preserves `B_ℓ` exactly when no `ℓ` false points (with repetition) sum,
//! as integer vectors, to the same vector as `ℓ` true points. The search
//! enumerates size-`ℓ` multisets of the smaller side, records their sum
//! vectors in a hash set, then scans the multisets of the other side in
//! lexicographic order. The reported witness is therefore the same whether
//! the scan runs sequentially or in parallel.
//!
//! Sum vectors are packed into one `u128` (each coordinate gets
//! `⌈log2(ℓ+1)⌉` bits, so adding packed points never carries) whenever they
//! fit; otherwise into a byte vector.

use std::collections::HashSet;
use std::hash::Hash;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::boolfn::{bit, BoolFn, Point};
use crate::constraints::{make_b, ViolationMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default cap on enumerated multisets (both sides together).
pub const DEFAULT_MULTISET_BUDGET: u128 = 100_000_000;

/// Two size-`ℓ` multisets, of false and of true points, with equal sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsummabilityWitness {
    ell: usize,
    false_points: Vec<Point>,
    true_points: Vec<Point>,
}

impl AsummabilityWitness {
    /// Checks the shape and the sum equality; membership in `f⁻¹(0)` and
    /// `f⁻¹(1)` is checked by [`validate`](Self::validate).
    pub fn new(ell: usize, false_points: Vec<Point>, true_points: Vec<Point>) -> Result<Self> {
        let w = AsummabilityWitness {
            ell,
            false_points,
            true_points,
        };
        w.check_shape()?;
        Ok(w)
    }

    fn check_shape(&self) -> Result<()> {
        if self.ell < 2 {
            return Err(Error::validation("witness needs l >= 2"));
        }
        Error::check_dim(self.ell, self.false_points.len())?;
        Error::check_dim(self.ell, self.true_points.len())?;
        let n = self.arity();
        for p in self.false_points.iter().chain(&self.true_points) {
            Error::check_dim(n, p.len())?;
        }
        if sum_points(&self.false_points, n) != sum_points(&self.true_points, n) {
            return Err(Error::validation("multiset sums differ"));
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn arity(&self) -> usize {
        self.false_points.first().map_or(0, Point::len)
    }

    pub fn false_points(&self) -> &[Point] {
        &self.false_points
    }

    pub fn true_points(&self) -> &[Point] {
        &self.true_points
    }

    /// The common coordinate sum vector.
    pub fn sum(&self) -> Vec<usize> {
        sum_points(&self.false_points, self.arity())
    }

    /// Re-derives everything from scratch against `f`.
    pub fn validate(&self, f: &BoolFn) -> Result<()> {
        self.check_shape()?;
        Error::check_dim(f.arity(), self.arity())?;
        for p in &self.false_points {
            if f.eval(p)? {
                return Err(Error::validation(format!("{p} is not a false point")));
            }
        }
        for p in &self.true_points {
            if !f.eval(p)? {
                return Err(Error::validation(format!("{p} is not a true point")));
            }
        }
        Ok(())
    }

    /// The `B_ℓ` violation whose rows are the false points then the true
    /// points.
    pub fn to_violation_matrix(&self) -> ViolationMatrix {
        let rows = self
            .false_points
            .iter()
            .chain(&self.true_points)
            .cloned()
            .collect();
        let z = Point::new((0..2 * self.ell).map(|i| i >= self.ell).collect());
        ViolationMatrix::new(rows, z).expect("2l rows and 2l outputs")
    }

    /// Reads a `B_ℓ` violation back as a witness, swapping the row halves
    /// when `z = 1^ℓ 0^ℓ`.
    pub fn from_violation_matrix(vm: &ViolationMatrix) -> Result<Self> {
        let h = vm.height();
        if !h.is_multiple_of(2) {
            return Err(Error::validation("B_l violations have an even number of rows"));
        }
        let ell = h / 2;
        let z = vm.z().bits();
        let (lo, hi) = z.split_at(ell);
        let rows = vm.rows();
        let (false_rows, true_rows) = if lo.iter().all(|b| !b) && hi.iter().all(|&b| b) {
            (&rows[..ell], &rows[ell..])
        } else if lo.iter().all(|&b| b) && hi.iter().all(|b| !b) {
            (&rows[ell..], &rows[..ell])
        } else {
            return Err(Error::validation("image column is inside S(B_l)"));
        };
        AsummabilityWitness::new(ell, false_rows.to_vec(), true_rows.to_vec())
    }
}

fn sum_points(points: &[Point], n: usize) -> Vec<usize> {
    let mut s = vec![0usize; n];
    for p in points {
        for (acc, &b) in s.iter_mut().zip(p.bits()) {
            *acc += b as usize;
        }
    }
    s
}

/// Number of size-`k` multisets drawn from `n` items, saturating.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return (k == 0) as u128;
    }
    // C(n + k - 1, k), built incrementally so every intermediate is integral.
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        let num = n as u128 - 1 + i;
        acc = match acc.checked_mul(num) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

trait SumKey: Clone + Hash + Eq + Send + Sync {
    fn add_assign(&mut self, other: &Self);
}

impl SumKey for u128 {
    #[inline]
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
}

impl SumKey for Vec<u8> {
    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += *b;
        }
    }
}

/// Visits the size-`ell` multisets of `keys` in lexicographic order with
/// their sums. With `first = Some(s)` only multisets whose least element is
/// `s` are visited.
fn for_each_multiset<K: SumKey>(
    keys: &[K],
    zero: &K,
    ell: usize,
    first: Option<usize>,
    mut visit: impl FnMut(&[usize], &K) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n = keys.len();
    let start = first.unwrap_or(0);
    if start >= n {
        return ControlFlow::Continue(());
    }
    let floor = first.map_or(0, |_| 1);
    let mut c = vec![start; ell];
    let mut partial = vec![zero.clone(); ell + 1];
    let refresh = |c: &[usize], partial: &mut Vec<K>, from: usize| {
        for j in from..ell {
            let mut next = partial[j].clone();
            next.add_assign(&keys[c[j]]);
            partial[j + 1] = next;
        }
    };
    refresh(&c, &mut partial, 0);
    loop {
        visit(&c, &partial[ell])?;
        let Some(j) = (floor..ell).rev().find(|&j| c[j] + 1 < n) else {
            return ControlFlow::Continue(());
        };
        c[j] += 1;
        let v = c[j];
        for x in c.iter_mut().skip(j + 1) {
            *x = v;
        }
        refresh(&c, &mut partial, j);
    }
}

/// Hash the smaller side's sums, scan the larger side. Returns indices into
/// `false_pts` and `true_pts`.
fn search_keys<K: SumKey>(
    exec: Exec,
    false_keys: &[K],
    true_keys: &[K],
    zero: &K,
    ell: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let hash_false = false_keys.len() <= true_keys.len();
    let (hashed, scanned) = if hash_false {
        (false_keys, true_keys)
    } else {
        (true_keys, false_keys)
    };

    let mut sums: HashSet<K> = HashSet::new();
    let _ = for_each_multiset(hashed, zero, ell, None, |_, s| {
        sums.insert(s.clone());
        ControlFlow::Continue(())
    });

    let (scan_hit, key) = exec.find_map_first(0..scanned.len(), |first| {
        let mut hit = None;
        let _ = for_each_multiset(scanned, zero, ell, Some(first), |c, s| {
            if sums.contains(s) {
                hit = Some((c.to_vec(), s.clone()));
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        hit
    })?;

    let mut hashed_hit = None;
    let _ = for_each_multiset(hashed, zero, ell, None, |c, s| {
        if *s == key {
            hashed_hit = Some(c.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let hashed_hit = hashed_hit.expect("sum was recorded from this side");
    Some(if hash_false {
        (hashed_hit, scan_hit)
    } else {
        (scan_hit, hashed_hit)
    })
}

/// Equal-sum search restricted to the given false and true point indices.
fn search_points(
    exec: Exec,
    arity: usize,
    false_pts: &[usize],
    true_pts: &[usize],
    ell: usize,
    budget: u128,
) -> Result<Option<AsummabilityWitness>> {
    search_points_keyed(exec, arity, false_pts, true_pts, ell, budget, true)
}

fn search_points_keyed(
    exec: Exec,
    arity: usize,
    false_pts: &[usize],
    true_pts: &[usize],
    ell: usize,
    budget: u128,
    allow_packed: bool,
) -> Result<Option<AsummabilityWitness>> {
    if ell < 2 {
        return Err(Error::domain(format!("l must be at least 2, got {ell}")));
    }
    let needed = multiset_count(false_pts.len(), ell)
        .saturating_add(multiset_count(true_pts.len(), ell));
    Error::check_budget("multisets", needed, budget)?;
    if false_pts.is_empty() || true_pts.is_empty() {
        return Ok(None);
    }

    let coord_bits = (usize::BITS - ell.leading_zeros()) as usize;
    let hit = if allow_packed && arity * coord_bits <= 128 {
        let pack = |idx: &usize| -> u128 {
            (0..arity)
                .filter(|&i| bit(*idx, arity, i))
                .fold(0u128, |acc, i| acc | 1u128 << (i * coord_bits))
        };
        let fk: Vec<u128> = false_pts.iter().map(pack).collect();
        let tk: Vec<u128> = true_pts.iter().map(pack).collect();
        search_keys(exec, &fk, &tk, &0u128, ell)
    } else {
        if ell > u8::MAX as usize {
            return Err(Error::domain(format!(
                "l = {ell} does not fit byte-vector sums at arity {arity}"
            )));
        }
        let unpack = |idx: &usize| -> Vec<u8> {
            (0..arity).map(|i| bit(*idx, arity, i) as u8).collect()
        };
        let fk: Vec<Vec<u8>> = false_pts.iter().map(unpack).collect();
        let tk: Vec<Vec<u8>> = true_pts.iter().map(unpack).collect();
        search_keys(exec, &fk, &tk, &vec![0u8; arity], ell)
    };

    Ok(hit.map(|(fc, tc)| {
        let pts = |side: &[usize], c: Vec<usize>| -> Vec<Point> {
            c.into_iter()
                .map(|k| Point::from_index(side[k], arity))
                .collect()
        };
        AsummabilityWitness::new(ell, pts(false_pts, fc), pts(true_pts, tc))
            .expect("search only reports equal sums")
    }))
}

/// Witness that `f` fails `B_ℓ`, or `None` when `f ∈ Pol B_ℓ`.
pub fn equal_sums_witness(
    f: &BoolFn,
    ell: usize,
    budget: u128,
) -> Result<Option<AsummabilityWitness>> {
    equal_sums_witness_with(Exec::default(), f, ell, budget)
}

pub fn equal_sums_witness_with(
    exec: Exec,
    f: &BoolFn,
    ell: usize,
    budget: u128,
) -> Result<Option<AsummabilityWitness>> {
    search_points(
        exec,
        f.arity(),
        &f.false_indices(),
        &f.true_indices(),
        ell,
        budget,
    )
}

/// `f ∈ Pol B_ℓ`, decided through the multiset search alone.
pub fn preserves_b_fast(f: &BoolFn, ell: usize, budget: u128) -> Result<bool> {
    Ok(equal_sums_witness(f, ell, budget)?.is_none())
}

/// No equal-sum witness for any `m ∈ {2..k}`, i.e. `f ∈ Pol A_k`.
pub fn is_k_asummable(f: &BoolFn, k: usize, budget: u128) -> Result<bool> {
    if k < 2 {
        return Err(Error::domain("k-asummability needs k >= 2"));
    }
    for m in 2..=k {
        if !preserves_b_fast(f, m, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A hyperplane with all false points weakly below and all true points
/// weakly above: `w·a ≤ t` on `f⁻¹(0)`, `w·b ≥ t` on `f⁻¹(1)`.
///
/// If `a_1 + … + a_ℓ = b_1 + … + b_ℓ` then `Σ w·a_i = Σ w·b_i`, which forces
/// every point of an equal-sum witness onto the hyperplane. The search can
/// therefore be restricted to the boundary points without losing anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakSeparator {
    weights: Vec<BigInt>,
    threshold: BigInt,
}

/// Boundary points of a validated separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub false_points: Vec<usize>,
    pub true_points: Vec<usize>,
}

impl WeakSeparator {
    pub fn new(weights: Vec<BigInt>, threshold: BigInt) -> Self {
        WeakSeparator { weights, threshold }
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn threshold(&self) -> &BigInt {
        &self.threshold
    }

    /// `w · a` at table index `idx`.
    pub fn dot(&self, idx: usize) -> BigInt {
        let n = self.weights.len();
        (0..n)
            .filter(|&i| bit(idx, n, i))
            .fold(BigInt::zero(), |acc, i| acc + &self.weights[i])
    }

    /// Checks the separation over all of `B^n` and returns the points lying
    /// on the hyperplane.
    pub fn boundary(&self, f: &BoolFn) -> Result<Boundary> {
        Error::check_dim(f.arity(), self.weights.len())?;
        let sides = Exec::default().map_collect(0..f.size(), |idx| {
            let d = self.dot(idx);
            let v = f.value(idx);
            if (!v && d > self.threshold) || (v && d < self.threshold) {
                Err(idx)
            } else {
                Ok(d == self.threshold)
            }
        });
        let mut b = Boundary {
            false_points: Vec::new(),
            true_points: Vec::new(),
        };
        for (idx, side) in sides.into_iter().enumerate() {
            match side {
                Err(bad) => {
                    return Err(Error::validation(format!(
                        "{} is on the wrong side of the separator",
                        Point::from_index(bad, f.arity())
                    )))
                }
                Ok(true) if f.value(idx) => b.true_points.push(idx),
                Ok(true) => b.false_points.push(idx),
                Ok(false) => {}
            }
        }
        Ok(b)
    }
}

/// [`equal_sums_witness`] over the boundary of a weak separator. Exact, and
/// usually far smaller than the unrestricted search.
pub fn equal_sums_witness_separated(
    f: &BoolFn,
    ell: usize,
    separator: &WeakSeparator,
    budget: u128,
) -> Result<Option<AsummabilityWitness>> {
    let b = separator.boundary(f)?;
    search_points(
        Exec::default(),
        f.arity(),
        &b.false_points,
        &b.true_points,
        ell,
        budget,
    )
}

/// Cross-check of a witness against the raw `B_ℓ` constraint.
pub fn witness_violates_b(w: &AsummabilityWitness, f: &BoolFn) -> Result<()> {
    let q = make_b(w.ell())?;
    w.to_violation_matrix().validate(f, &q)
}
