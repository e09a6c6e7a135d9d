// SPDX-License-Identifier: Apache-2.0

//! Taylor–Zwicker functions `f_k` built from magic-square weights.
//!
//! Cells `(p, q)` of a `k × k` grid are 1-based in the public API and map to
//! variable `(p-1)·k + (q-1)` (row-major). The weight of a cell is the base-`R`
//! number whose digits are the entries of `A^{p,q}` read row by row, and the
//! threshold `t` encodes the all-`(k-1)` matrix. With `R ≥ k² - k + 1` adding
//! weights never carries, so `x·w = t` exactly when `x` is a row or a column.
//! `f_k(x) = 1` iff `x·w > t` or `x` is a row.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::asummability::{
    equal_sums_witness, equal_sums_witness_separated, multiset_count, AsummabilityWitness,
    WeakSeparator,
};
use crate::boolfn::{BoolFn, Point, MAX_ARITY};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest `k` whose `2^{k²}` subsets [`verify_row_col_lemma`] enumerates.
pub const MAX_ROW_COL_K: usize = 4;

/// A `k × k` matrix of naturals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareMatrix {
    k: usize,
    entries: Vec<u64>,
}

impl SquareMatrix {
    pub fn new(k: usize, entries: Vec<u64>) -> Result<Self> {
        Error::check_dim(k * k, entries.len())?;
        Ok(SquareMatrix { k, entries })
    }

    pub fn constant(k: usize, v: u64) -> Self {
        SquareMatrix {
            k,
            entries: vec![v; k * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[(i - 1) * self.k + (j - 1)]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.k).map(<[u64]>::to_vec).collect()
    }

    pub fn add(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        Error::check_dim(self.k, other.k)?;
        Ok(SquareMatrix {
            k: self.k,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::domain(format!("k must be at least 3, got {k}")));
    }
    Ok(())
}

/// `A^{p,q}`: `k-1` at `(p, q)`, 1 off row `p` and column `q`, 0 elsewhere.
pub fn a_matrix(k: usize, p: usize, q: usize) -> Result<SquareMatrix> {
    check_k(k)?;
    if !(1..=k).contains(&p) || !(1..=k).contains(&q) {
        return Err(Error::domain(format!("cell ({p}, {q}) outside 1..={k}")));
    }
    let entries = (1..=k)
        .flat_map(|i| (1..=k).map(move |j| (i, j)))
        .map(|(i, j)| {
            if (i, j) == (p, q) {
                k as u64 - 1
            } else if i != p && j != q {
                1
            } else {
                0
            }
        })
        .collect();
    SquareMatrix::new(k, entries)
}

/// The base-`R` number with the entries of `m` as digits, read row-major.
pub fn phi(m: &SquareMatrix, base: u64) -> Result<BigUint> {
    if base < 2 {
        return Err(Error::Encoding(format!("base {base} is below 2")));
    }
    let r = BigUint::from(base);
    m.entries.iter().try_fold(BigUint::zero(), |acc, &d| {
        if d >= base {
            Err(Error::Encoding(format!("digit {d} does not fit base {base}")))
        } else {
            Ok(acc * &r + d)
        }
    })
}

/// Smallest base for which weight sums never carry.
pub fn min_base(k: usize) -> u64 {
    (k * k - k + 1) as u64
}

/// `f_k` with its weights.
#[derive(Debug, Clone)]
pub struct TzInstance {
    k: usize,
    base: u64,
    weights: Vec<BigUint>,
    threshold: BigUint,
    table: Option<BoolFn>,
}

impl TzInstance {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.k * self.k
    }

    /// Variable of 1-based cell `(p, q)`.
    pub fn beta(&self, p: usize, q: usize) -> usize {
        (p - 1) * self.k + (q - 1)
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn threshold(&self) -> &BigUint {
        &self.threshold
    }

    /// The truth table; a resource error when `k²` exceeds the table ceiling.
    pub fn function(&self) -> Result<&BoolFn> {
        self.table.as_ref().ok_or(Error::Resource {
            what: "truth table arity",
            needed: self.arity() as u128,
            budget: MAX_ARITY as u128,
        })
    }

    /// Table index of the characteristic tuple of row `p` (1-based).
    pub fn row(&self, p: usize) -> usize {
        let k = self.k;
        (1..=k).fold(0, |acc, q| acc | self.cell_bit(p, q))
    }

    /// Table index of the characteristic tuple of column `q` (1-based).
    pub fn column(&self, q: usize) -> usize {
        let k = self.k;
        (1..=k).fold(0, |acc, p| acc | self.cell_bit(p, q))
    }

    fn cell_bit(&self, p: usize, q: usize) -> usize {
        1 << (self.arity() - 1 - self.beta(p, q))
    }

    pub fn rows(&self) -> Vec<usize> {
        (1..=self.k).map(|p| self.row(p)).collect()
    }

    pub fn columns(&self) -> Vec<usize> {
        (1..=self.k).map(|q| self.column(q)).collect()
    }

    /// `x·w` for the point at table index `idx`.
    pub fn dot(&self, idx: usize) -> BigUint {
        let n = self.arity();
        (0..n)
            .filter(|&i| idx >> (n - 1 - i) & 1 == 1)
            .fold(BigUint::zero(), |acc, i| acc + &self.weights[i])
    }

    /// `(w, t)` as a weak separator of `f_k`: false points lie on or below
    /// the hyperplane, true points on or above.
    pub fn separator(&self) -> WeakSeparator {
        WeakSeparator::new(
            self.weights.iter().map(|w| w.clone().into()).collect(),
            self.threshold.clone().into(),
        )
    }
}

/// Weights as `u128` when every dot product fits.
fn small_weights(weights: &[BigUint]) -> Option<Vec<u128>> {
    let total = weights.iter().fold(BigUint::zero(), |acc, w| acc + w);
    total.to_u128()?;
    weights.iter().map(ToPrimitive::to_u128).collect()
}

/// Builds `f_k` over base `R` (default `k² - k + 1`). The table is
/// materialized when `k²` is within the table ceiling.
pub fn build_tz(k: usize, base: Option<u64>) -> Result<TzInstance> {
    check_k(k)?;
    let base = base.unwrap_or_else(|| min_base(k));
    if base < min_base(k) {
        return Err(Error::domain(format!(
            "base {base} is below k^2 - k + 1 = {}",
            min_base(k)
        )));
    }
    let mut weights = Vec::with_capacity(k * k);
    for p in 1..=k {
        for q in 1..=k {
            weights.push(phi(&a_matrix(k, p, q)?, base)?);
        }
    }
    let threshold = phi(&SquareMatrix::constant(k, k as u64 - 1), base)?;
    let mut inst = TzInstance {
        k,
        base,
        weights,
        threshold,
        table: None,
    };
    if inst.arity() <= MAX_ARITY {
        let rows = inst.rows();
        let table = match small_weights(&inst.weights) {
            Some(w) => {
                let t = inst.threshold.to_u128().expect("t is below the weight total");
                let n = inst.arity();
                BoolFn::from_fn(n, |idx| {
                    let dot: u128 = (0..n)
                        .filter(|&i| idx >> (n - 1 - i) & 1 == 1)
                        .map(|i| w[i])
                        .sum();
                    dot > t || rows.contains(&idx)
                })?
            }
            None => BoolFn::from_fn(inst.arity(), |idx| {
                inst.dot(idx) > inst.threshold || rows.contains(&idx)
            })?,
        };
        inst.table = Some(table);
    }
    Ok(inst)
}

/// Outcome of the exhaustive row/column check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowColCheck {
    pub k: usize,
    pub subsets_checked: usize,
    /// Subsets `S` with `Σ_S A^{p,q} = B`, as characteristic tuples.
    pub qualifying: Vec<Point>,
    /// The qualifying subsets are exactly the `k` rows and `k` columns.
    pub holds: bool,
}

/// Enumerates every `S ⊆ [k]²` and keeps those whose matrices sum to the
/// all-`(k-1)` matrix.
pub fn verify_row_col_lemma(k: usize) -> Result<RowColCheck> {
    check_k(k)?;
    Error::check_budget("row/column lemma k", k as u128, MAX_ROW_COL_K as u128)?;
    let n = k * k;
    let cells: Vec<SquareMatrix> = (1..=k)
        .flat_map(|p| (1..=k).map(move |q| (p, q)))
        .map(|(p, q)| a_matrix(k, p, q))
        .collect::<Result<_>>()?;
    let target = SquareMatrix::constant(k, k as u64 - 1);
    let hits = Exec::default().map_collect(0..1usize << n, |s| {
        let mut sum = vec![0u64; n];
        for (c, a) in cells.iter().enumerate() {
            if s >> (n - 1 - c) & 1 == 1 {
                for (acc, v) in sum.iter_mut().zip(&a.entries) {
                    *acc += v;
                }
            }
        }
        sum == target.entries
    });
    let qualifying: Vec<usize> = (0..1usize << n).filter(|&s| hits[s]).collect();
    let inst = build_tz(k, None)?;
    let mut expected: Vec<usize> = inst.rows().into_iter().chain(inst.columns()).collect();
    expected.sort_unstable();
    Ok(RowColCheck {
        k,
        subsets_checked: 1 << n,
        holds: qualifying == expected,
        qualifying: qualifying.iter().map(|&s| Point::from_index(s, n)).collect(),
    })
}

/// `x·w = t` exactly on rows and columns, over all of `B^{k²}`.
pub fn verify_dot_classification(inst: &TzInstance) -> Result<bool> {
    let f = inst.function()?;
    let mut lines: Vec<usize> = inst.rows().into_iter().chain(inst.columns()).collect();
    lines.sort_unstable();
    Ok(Exec::default().all(0..f.size(), |idx| {
        (inst.dot(idx) == inst.threshold) == lines.binary_search(&idx).is_ok()
    }))
}

/// `m = ℓ/k` copies of every column (false points) against `m` copies of
/// every row (true points); both sum to `(m, …, m)`.
pub fn periodic_witness(inst: &TzInstance, ell: usize) -> Result<AsummabilityWitness> {
    if ell == 0 || !ell.is_multiple_of(inst.k) {
        return Err(Error::domain(format!(
            "l = {ell} is not a positive multiple of k = {}",
            inst.k
        )));
    }
    let m = ell / inst.k;
    let n = inst.arity();
    let copies = |lines: Vec<usize>| -> Vec<Point> {
        lines
            .into_iter()
            .flat_map(|idx| std::iter::repeat_n(Point::from_index(idx, n), m))
            .collect()
    };
    let w = AsummabilityWitness::new(ell, copies(inst.columns()), copies(inst.rows()))?;
    if let Ok(f) = inst.function() {
        w.validate(f)?;
    }
    Ok(w)
}

/// How a `B_ℓ` verdict for `f_k` was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TzMethod {
    /// `k | ℓ`: rows against columns.
    Periodic,
    /// Unrestricted equal-sum search over all points.
    Multiset,
    /// Equal-sum search over the points on the hyperplane `x·w = t`.
    Separator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TzVerdict {
    pub ell: usize,
    pub preserves: bool,
    pub method: TzMethod,
    pub witness: Option<AsummabilityWitness>,
}

/// Decides `f_k ∈ Pol B_ℓ`. Multiples of `k` are refuted by
/// [`periodic_witness`]; otherwise the full multiset search runs if it fits
/// the budget, and the separator-restricted search if it does not.
pub fn tz_preserves_b(inst: &TzInstance, ell: usize, budget: u128) -> Result<TzVerdict> {
    if ell < 2 {
        return Err(Error::domain(format!("l must be at least 2, got {ell}")));
    }
    if ell.is_multiple_of(inst.k) {
        return Ok(TzVerdict {
            ell,
            preserves: false,
            method: TzMethod::Periodic,
            witness: Some(periodic_witness(inst, ell)?),
        });
    }
    let f = inst.function()?;
    let ones = f.count_ones();
    let full = multiset_count(ones, ell).saturating_add(multiset_count(f.size() - ones, ell));
    let (witness, method) = if full <= budget {
        (equal_sums_witness(f, ell, budget)?, TzMethod::Multiset)
    } else {
        (
            equal_sums_witness_separated(f, ell, &inst.separator(), budget)?,
            TzMethod::Separator,
        )
    };
    Ok(TzVerdict {
        ell,
        preserves: witness.is_none(),
        method,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asummability::DEFAULT_MULTISET_BUDGET;
    use crate::clones::is_monotone;

    #[test]
    fn a_matrix_examples() {
        assert_eq!(
            a_matrix(4, 2, 3).unwrap().rows(),
            vec![
                vec![1, 1, 0, 1],
                vec![0, 0, 3, 0],
                vec![1, 1, 0, 1],
                vec![1, 1, 0, 1]
            ]
        );
        assert_eq!(
            a_matrix(3, 1, 1).unwrap().rows(),
            vec![vec![2, 0, 0], vec![0, 1, 1], vec![0, 1, 1]]
        );
        for k in 3..=6 {
            for p in 1..=k {
                for q in 1..=k {
                    let a = a_matrix(k, p, q).unwrap();
                    for row in a.rows() {
                        assert_eq!(row.iter().sum::<u64>(), k as u64 - 1);
                    }
                }
            }
        }
        assert!(a_matrix(3, 0, 1).is_err());
        assert!(a_matrix(3, 1, 4).is_err());
        assert!(a_matrix(2, 1, 1).is_err());
    }

    fn digits(s: &str, base: u32) -> BigUint {
        BigUint::parse_bytes(s.as_bytes(), base).unwrap()
    }

    #[test]
    fn phi_examples() {
        let w = phi(&a_matrix(4, 2, 3).unwrap(), 13).unwrap();
        assert_eq!(w, digits("1101003011011101", 13));
        let t = phi(&SquareMatrix::constant(4, 3), 13).unwrap();
        assert_eq!(t, digits("3333333333333333", 13));
        let a = a_matrix(3, 1, 1).unwrap();
        let b = a_matrix(3, 2, 2).unwrap();
        assert_eq!(
            phi(&a.add(&b).unwrap(), 7).unwrap(),
            phi(&a, 7).unwrap() + phi(&b, 7).unwrap()
        );
        assert!(matches!(
            phi(&SquareMatrix::constant(3, 7), 7),
            Err(Error::Encoding(_))
        ));
    }

    #[test]
    fn build_examples() {
        let f3 = build_tz(3, None).unwrap();
        assert_eq!(f3.base(), 7);
        assert_eq!(f3.arity(), 9);
        assert_eq!(
            f3.threshold(),
            &phi(&SquareMatrix::constant(3, 2), 7).unwrap()
        );
        let f = f3.function().unwrap();
        assert!(f.value(f3.row(1)));
        assert!(!f.value(f3.column(1)));
        assert_eq!(f3.dot(f3.column(1)), *f3.threshold());
        assert!(build_tz(3, Some(6)).is_err());
        assert!(build_tz(3, Some(11)).is_ok());
        let f5 = build_tz(5, None).unwrap();
        assert_eq!(f5.weights().len(), 25);
        assert!(matches!(f5.function(), Err(Error::Resource { .. })));
    }

    #[test]
    fn row_col_lemma_k3() {
        let r = verify_row_col_lemma(3).unwrap();
        assert!(r.holds);
        assert_eq!(r.subsets_checked, 512);
        assert_eq!(r.qualifying.len(), 6);
        assert!(verify_row_col_lemma(5).is_err());
        // {(1,1), (2,2)}: entry (1,2) sums to 0 + 0, not 2.
        let s = a_matrix(3, 1, 1).unwrap().add(&a_matrix(3, 2, 2).unwrap()).unwrap();
        assert_ne!(s, SquareMatrix::constant(3, 2));
    }

    #[test]
    fn f3_facts() {
        let inst = build_tz(3, None).unwrap();
        let f = inst.function().unwrap();
        assert!(is_monotone(f));
        assert!(verify_dot_classification(&inst).unwrap());
        assert_eq!(f.essential_variables().len(), 9);
    }

    #[test]
    fn periodic_examples() {
        let inst = build_tz(3, None).unwrap();
        let w3 = periodic_witness(&inst, 3).unwrap();
        assert_eq!(w3.sum(), vec![1; 9]);
        let w6 = periodic_witness(&inst, 6).unwrap();
        assert_eq!(w6.sum(), vec![2; 9]);
        assert!(periodic_witness(&inst, 4).is_err());
        assert!(periodic_witness(&inst, 0).is_err());
    }

    #[test]
    fn f3_b_verdicts() {
        let inst = build_tz(3, None).unwrap();
        let b2 = tz_preserves_b(&inst, 2, DEFAULT_MULTISET_BUDGET).unwrap();
        assert!(b2.preserves);
        assert_eq!(b2.method, TzMethod::Multiset);
        let b3 = tz_preserves_b(&inst, 3, DEFAULT_MULTISET_BUDGET).unwrap();
        assert!(!b3.preserves);
        assert_eq!(b3.method, TzMethod::Periodic);
        // The raw search finds a B_3 violation too.
        let raw = equal_sums_witness(inst.function().unwrap(), 3, DEFAULT_MULTISET_BUDGET)
            .unwrap()
            .unwrap();
        raw.validate(inst.function().unwrap()).unwrap();
        // Separator and raw search agree where both run.
        let sep = equal_sums_witness_separated(
            inst.function().unwrap(),
            2,
            &inst.separator(),
            DEFAULT_MULTISET_BUDGET,
        )
        .unwrap();
        assert!(sep.is_none());
        // A tiny budget forces the separator path.
        let small = tz_preserves_b(&inst, 4, 1000).unwrap();
        assert_eq!(small.method, TzMethod::Separator);
        assert!(small.preserves);
    }
}
