// SPDX-License-Identifier: Apache-2.0

//! Relational constraints `(R, S)` and the preservation predicate `f ▷ (R, S)`.
//!
//! A relation of arity `m` is a sorted set of `m`-bit words, using the same
//! index convention as truth tables (coordinate 0 is the most significant
//! bit). Text forms: `<arity>;<word>,<word>,...` for a relation and `R|S` for
//! a constraint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::boolfn::{bit, BoolFn, MinorMap, Point};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest relation arity.
pub const MAX_RELATION_ARITY: usize = 16;

/// Largest `ℓ` for which `B_ℓ` is materialized.
pub const MAX_B_ELL: usize = MAX_RELATION_ARITY / 2;

/// Default cap on enumerated column tuples per preservation check.
pub const DEFAULT_COLUMN_BUDGET: u128 = 100_000_000;

/// Largest arity `pol_enumerate` and `minimal_forbidden_minors` will sweep.
pub const MAX_SWEEP_ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: Vec<u32>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = u32>) -> Result<Self> {
        if arity == 0 || arity > MAX_RELATION_ARITY {
            return Err(Error::domain(format!(
                "relation arity {arity} outside 1..={MAX_RELATION_ARITY}"
            )));
        }
        let mut tuples: Vec<u32> = tuples.into_iter().collect();
        if let Some(&bad) = tuples.iter().find(|&&t| (t as u64) >= 1u64 << arity) {
            return Err(Error::domain(format!(
                "word {bad} does not fit arity {arity}"
            )));
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Relation { arity, tuples })
    }

    pub fn from_points(arity: usize, points: &[Point]) -> Result<Self> {
        for p in points {
            Error::check_dim(arity, p.len())?;
        }
        Relation::new(arity, points.iter().map(|p| p.index() as u32))
    }

    pub fn full(arity: usize) -> Result<Self> {
        Relation::new(arity, 0..(1u32 << arity))
    }

    pub fn empty(arity: usize) -> Result<Self> {
        Relation::new(arity, [])
    }

    pub fn filter(arity: usize, keep: impl Fn(u32) -> bool) -> Result<Self> {
        Relation::new(arity, (0..(1u32 << arity)).filter(|&t| keep(t)))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[u32] {
        &self.tuples
    }

    pub fn contains(&self, word: u32) -> bool {
        self.tuples.binary_search(&word).is_ok()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.len() == self.arity && self.contains(p.index() as u32)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples.iter().all(|&t| other.contains(t))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.tuples
            .iter()
            .map(|&t| Point::from_index(t as usize, self.arity))
    }

    /// Dense membership table, for inner loops.
    fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; 1 << self.arity];
        for &t in &self.tuples {
            v[t as usize] = true;
        }
        v
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.arity)?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Relation {
    fn parse_at(text: &str, offset: usize) -> Result<Self> {
        let (arity_text, words) = text
            .split_once(';')
            .ok_or_else(|| Error::parse(offset, "expected `<arity>;<word>,...`"))?;
        let arity: usize = arity_text
            .trim()
            .parse()
            .map_err(|_| Error::parse(offset, format!("bad arity `{arity_text}`")))?;
        let mut pos = offset + arity_text.len() + 1;
        let mut tuples = Vec::new();
        if !words.trim().is_empty() {
            for w in words.split(',') {
                let t: u32 = w
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos, format!("bad word `{w}`")))?;
                tuples.push(t);
                pos += w.len() + 1;
            }
        }
        Relation::new(arity, tuples).map_err(|e| Error::parse(offset, e.to_string()))
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::parse_at(s, 0)
    }
}

/// An `(antecedent, consequent)` pair of equal arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationalConstraint {
    antecedent: Relation,
    consequent: Relation,
}

impl RelationalConstraint {
    pub fn new(antecedent: Relation, consequent: Relation) -> Result<Self> {
        Error::check_dim(antecedent.arity, consequent.arity)?;
        Ok(RelationalConstraint {
            antecedent,
            consequent,
        })
    }

    /// `(R, R)`: preserving it is preserving the relation `R`.
    pub fn relation(r: Relation) -> Self {
        RelationalConstraint {
            antecedent: r.clone(),
            consequent: r,
        }
    }

    pub fn arity(&self) -> usize {
        self.antecedent.arity
    }

    pub fn antecedent(&self) -> &Relation {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Relation {
        &self.consequent
    }

    /// Binary equality constraint.
    pub fn equality() -> Self {
        RelationalConstraint::relation(Relation::new(2, [0b00, 0b11]).expect("valid"))
    }
}

impl fmt::Display for RelationalConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.antecedent, self.consequent)
    }
}

impl FromStr for RelationalConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r, rest) = s
            .split_once('|')
            .ok_or_else(|| Error::parse(0, "expected `R|S`"))?;
        let antecedent = Relation::parse_at(r, 0)?;
        let consequent = Relation::parse_at(rest, r.len() + 1)?;
        RelationalConstraint::new(antecedent, consequent)
    }
}

/// `B_ℓ`: antecedent is the `2ℓ`-tuples whose halves have equal weight,
/// consequent is everything but `0^ℓ 1^ℓ` and `1^ℓ 0^ℓ`.
pub fn make_b(ell: usize) -> Result<RelationalConstraint> {
    if !(2..=MAX_B_ELL).contains(&ell) {
        return Err(Error::domain(format!(
            "B_l is materialized for 2 <= l <= {MAX_B_ELL}, got {ell}"
        )));
    }
    let low = (1u32 << ell) - 1;
    let r = Relation::filter(2 * ell, |t| (t >> ell).count_ones() == (t & low).count_ones())?;
    let s = Relation::filter(2 * ell, |t| t != low && t != low << ell)?;
    RelationalConstraint::new(r, s)
}

/// `[B_2, ..., B_k]`.
pub fn make_a(k: usize) -> Result<Vec<RelationalConstraint>> {
    if k < 2 {
        return Err(Error::domain("A_k needs k >= 2"));
    }
    (2..=k).map(make_b).collect()
}

/// A matrix whose columns lie in the antecedent while its image column `z`
/// falls outside the consequent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationMatrix {
    rows: Vec<Point>,
    z: Point,
}

impl ViolationMatrix {
    pub fn new(rows: Vec<Point>, z: Point) -> Result<Self> {
        Error::check_dim(rows.len(), z.len())?;
        if let Some(first) = rows.first() {
            for r in &rows {
                Error::check_dim(first.len(), r.len())?;
            }
        }
        Ok(ViolationMatrix { rows, z })
    }

    /// The matrix with the given rows and `z` computed from `f`.
    pub fn from_rows(f: &BoolFn, rows: Vec<Point>) -> Result<Self> {
        let z = rows.iter().map(|r| f.eval(r)).collect::<Result<Vec<_>>>()?;
        ViolationMatrix::new(rows, Point::new(z))
    }

    pub fn rows(&self) -> &[Point] {
        &self.rows
    }

    pub fn z(&self) -> &Point {
        &self.z
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Point::len)
    }

    pub fn column(&self, j: usize) -> Point {
        Point::new(self.rows.iter().map(|r| r.get(j)).collect())
    }

    pub fn columns(&self) -> Vec<Point> {
        (0..self.width()).map(|j| self.column(j)).collect()
    }

    /// Independent re-check: every column in `R`, `z` is `f` applied row-wise,
    /// and `z ∉ S`.
    pub fn validate(&self, f: &BoolFn, q: &RelationalConstraint) -> Result<()> {
        Error::check_dim(q.arity(), self.height())?;
        Error::check_dim(f.arity(), self.width())?;
        for (j, col) in self.columns().iter().enumerate() {
            if !q.antecedent.contains_point(col) {
                return Err(Error::validation(format!(
                    "column {j} = {col} is not in the antecedent"
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if f.eval(row)? != self.z.get(i) {
                return Err(Error::validation(format!("z disagrees with f at row {i}")));
            }
        }
        if q.consequent.contains_point(&self.z) {
            return Err(Error::validation(format!(
                "image column {} is in the consequent",
                self.z
            )));
        }
        Ok(())
    }
}

fn column_tuple_count(r: usize, n: usize) -> u128 {
    (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Lexicographically first violating column tuple, searched in parallel over
/// the leading columns.
pub fn violation_witness_with(
    exec: Exec,
    f: &BoolFn,
    q: &RelationalConstraint,
    budget: u128,
) -> Result<Option<ViolationMatrix>> {
    let n = f.arity();
    let m = q.arity();
    let r = q.antecedent.tuples();
    Error::check_budget("antecedent column tuples", column_tuple_count(r.len(), n), budget)?;
    if r.is_empty() {
        return Ok(None);
    }
    let in_s = q.consequent.indicator();

    // Outer index enumerates the first `split` columns, inner odometer the rest.
    let mut split = 0;
    while split < n && (r.len() as u128).pow(split as u32) < 256 {
        split += 1;
    }
    let outer = r.len().pow(split as u32);

    let hit = exec.find_map_first(0..outer, |code| {
        let mut digits = vec![0usize; n];
        let mut rest = code;
        for j in (0..split).rev() {
            digits[j] = rest % r.len();
            rest /= r.len();
        }
        loop {
            let z = (0..m).fold(0usize, |acc, i| {
                let row = (0..n).fold(0usize, |acc, j| {
                    (acc << 1) | bit(r[digits[j]] as usize, m, i) as usize
                });
                (acc << 1) | f.value(row) as usize
            });
            if !in_s[z] {
                return Some(digits);
            }
            // Advance the inner odometer, last column fastest.
            let mut j = n;
            loop {
                if j == split {
                    return None;
                }
                j -= 1;
                digits[j] += 1;
                if digits[j] < r.len() {
                    break;
                }
                digits[j] = 0;
            }
        }
    });

    Ok(hit.map(|digits| {
        let rows = (0..m)
            .map(|i| Point::new(digits.iter().map(|&d| bit(r[d] as usize, m, i)).collect()))
            .collect();
        ViolationMatrix::from_rows(f, rows).expect("consistent dimensions")
    }))
}

pub fn violation_witness(
    f: &BoolFn,
    q: &RelationalConstraint,
    budget: u128,
) -> Result<Option<ViolationMatrix>> {
    violation_witness_with(Exec::default(), f, q, budget)
}

/// `f ▷ Q`, by enumerating all `|R|^n` column choices.
pub fn preserves(f: &BoolFn, q: &RelationalConstraint, budget: u128) -> Result<bool> {
    Ok(violation_witness(f, q, budget)?.is_none())
}

pub fn preserves_all(f: &BoolFn, qs: &[RelationalConstraint], budget: u128) -> Result<bool> {
    for q in qs {
        if !preserves(f, q, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every violating column tuple, in lexicographic order.
pub fn all_violations(
    f: &BoolFn,
    q: &RelationalConstraint,
    budget: u128,
) -> Result<Vec<ViolationMatrix>> {
    let n = f.arity();
    let r = q.antecedent.tuples();
    let total = column_tuple_count(r.len(), n);
    Error::check_budget("antecedent column tuples", total, budget)?;
    let m = q.arity();
    let mut out = Vec::new();
    for code in 0..total as usize {
        let mut rest = code;
        let mut cols = vec![0u32; n];
        for j in (0..n).rev() {
            cols[j] = r[rest % r.len()];
            rest /= r.len();
        }
        let rows: Vec<Point> = (0..m)
            .map(|i| Point::new(cols.iter().map(|&c| bit(c as usize, m, i)).collect()))
            .collect();
        let vm = ViolationMatrix::from_rows(f, rows)?;
        if !q.consequent.contains_point(&vm.z) {
            out.push(vm);
        }
    }
    Ok(out)
}

fn project(rel: &Relation, h: &[usize], vars: usize, existential: usize) -> Result<Relation> {
    let m = vars - existential;
    let n = rel.arity;
    let mut out = BTreeSet::new();
    for x in 0..(1usize << vars) {
        let word = h
            .iter()
            .fold(0u32, |acc, &v| (acc << 1) | bit(x, vars, v) as u32);
        if rel.contains(word) {
            out.insert((x >> existential) as u32);
        }
    }
    debug_assert_eq!(h.len(), n);
    Relation::new(m, out)
}

/// Simple minor of `q` (arity `n`) along `h: {0..n} → {0..vars}`,
/// existentially quantifying the last `existential` of the `vars` variables.
/// The result has arity `vars - existential`.
pub fn constraint_simple_minor(
    q: &RelationalConstraint,
    h: &[usize],
    vars: usize,
    existential: usize,
) -> Result<RelationalConstraint> {
    Error::check_dim(q.arity(), h.len())?;
    if existential >= vars {
        return Err(Error::domain("simple minor must keep at least one coordinate"));
    }
    if vars > MAX_RELATION_ARITY {
        return Err(Error::domain(format!("{vars} variables exceed relation arity limit")));
    }
    if let Some(&bad) = h.iter().find(|&&v| v >= vars) {
        return Err(Error::domain(format!("h maps to {bad}, outside 0..{vars}")));
    }
    RelationalConstraint::new(
        project(&q.antecedent, h, vars, existential)?,
        project(&q.consequent, h, vars, existential)?,
    )
}

/// `(R', S)` for `R' ⊆ R`.
pub fn restrict_antecedent(q: &RelationalConstraint, r: Relation) -> Result<RelationalConstraint> {
    if !r.is_subset(&q.antecedent) {
        return Err(Error::domain("restricted antecedent is not a subset"));
    }
    RelationalConstraint::new(r, q.consequent.clone())
}

/// `(R, S')` for `S' ⊇ S`.
pub fn extend_consequent(q: &RelationalConstraint, s: Relation) -> Result<RelationalConstraint> {
    if !q.consequent.is_subset(&s) {
        return Err(Error::domain("extended consequent is not a superset"));
    }
    RelationalConstraint::new(q.antecedent.clone(), s)
}

/// `(R, S ∩ S')` from `(R, S)` and `(R, S')`.
pub fn intersect_consequents(
    a: &RelationalConstraint,
    b: &RelationalConstraint,
) -> Result<RelationalConstraint> {
    if a.antecedent != b.antecedent {
        return Err(Error::domain("consequents can only be intersected over equal antecedents"));
    }
    let s = Relation::new(
        a.arity(),
        a.consequent
            .tuples()
            .iter()
            .copied()
            .filter(|&t| b.consequent.contains(t)),
    )?;
    RelationalConstraint::new(a.antecedent.clone(), s)
}

/// For each arity `1..=max_arity`, every function preserving all of `qs`.
pub fn pol_enumerate(
    qs: &[RelationalConstraint],
    max_arity: usize,
    budget: u128,
) -> Result<BTreeMap<usize, Vec<BoolFn>>> {
    pol_enumerate_with(Exec::default(), qs, max_arity, budget)
}

pub fn pol_enumerate_with(
    exec: Exec,
    qs: &[RelationalConstraint],
    max_arity: usize,
    budget: u128,
) -> Result<BTreeMap<usize, Vec<BoolFn>>> {
    if max_arity > MAX_SWEEP_ARITY {
        return Err(Error::Resource {
            what: "Pol enumeration arity",
            needed: max_arity as u128,
            budget: MAX_SWEEP_ARITY as u128,
        });
    }
    let mut out = BTreeMap::new();
    for n in 1..=max_arity {
        let fs = crate::boolfn::all_functions(n)?;
        let verdicts = exec.map_slice(&fs, |f| {
            for q in qs {
                if violation_witness_with(Exec::Sequential, f, q, budget)?.is_some() {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        let mut members = Vec::new();
        for (f, v) in fs.into_iter().zip(verdicts) {
            if v? {
                members.push(f);
            }
        }
        out.insert(n, members);
    }
    Ok(out)
}

/// Minimal forbidden minors of the class `{f : member(f)}` among functions of
/// arity at most `max_arity`, as canonical representatives of `≡`.
///
/// The class must be closed under minors on the searched range; this is
/// checked against identification, permutation and dummy-variable minors.
pub fn minimal_forbidden_minors<P>(member: P, max_arity: usize) -> Result<BTreeSet<BoolFn>>
where
    P: Fn(&BoolFn) -> Result<bool> + Sync + Send,
{
    if max_arity > MAX_SWEEP_ARITY {
        return Err(Error::Resource {
            what: "forbidden minor sweep arity",
            needed: max_arity as u128,
            budget: MAX_SWEEP_ARITY as u128,
        });
    }
    let exec = Exec::default();
    let mut verdicts: Vec<BTreeMap<BoolFn, bool>> = vec![BTreeMap::new()];
    for n in 1..=max_arity {
        let fs = crate::boolfn::all_functions(n)?;
        let vs = exec.map_slice(&fs, &member);
        let mut table = BTreeMap::new();
        for (f, v) in fs.into_iter().zip(vs) {
            table.insert(f, v?);
        }
        verdicts.push(table);
    }
    let is_member = |g: &BoolFn| verdicts[g.arity()][g];

    for n in 1..=max_arity {
        for (f, _) in verdicts[n].iter().filter(|(_, &v)| v) {
            let mut minors = Vec::new();
            if n >= 2 {
                minors.extend(f.identification_minors()?.into_iter().map(|(_, g)| g));
                for i in 0..n - 1 {
                    let mut swap: Vec<usize> = (0..n).collect();
                    swap.swap(i, i + 1);
                    minors.push(f.minor(&MinorMap::new(swap, n)?)?);
                }
            }
            if n < max_arity {
                minors.push(f.minor(&MinorMap::new((0..n).collect(), n + 1)?)?);
            }
            if let Some(bad) = minors.iter().find(|g| !is_member(g)) {
                return Err(Error::Consistency(format!(
                    "class is not minor-closed: {f} is a member but its minor {bad} is not"
                )));
            }
        }
    }

    let mut out = BTreeSet::new();
    for n in 1..=max_arity {
        for (f, _) in verdicts[n].iter().filter(|(_, &v)| !v) {
            let core = f.essential_core();
            if core.arity() != n && !(n == 1 && core.arity() == 1) {
                // Equivalent to a lower-arity function handled earlier.
                continue;
            }
            let minimal = n == 1
                || core
                    .identification_minors()?
                    .iter()
                    .all(|(_, g)| is_member(g));
            if minimal {
                out.insert(f.canonical_form());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::named::*;

    const BUDGET: u128 = 1 << 30;

    fn leq() -> RelationalConstraint {
        RelationalConstraint::relation(Relation::new(2, [0b00, 0b01, 0b11]).unwrap())
    }

    #[test]
    fn b_sizes_and_members() {
        let b2 = make_b(2).unwrap();
        assert_eq!(b2.antecedent().len(), 6);
        assert_eq!(b2.consequent().len(), 14);
        let b3 = make_b(3).unwrap();
        assert_eq!(b3.antecedent().len(), 20);
        assert_eq!(b3.consequent().len(), 62);
        assert!(b2.antecedent().contains_point(&Point::from_bits(&[0, 1, 1, 0])));
        assert!(!b2.antecedent().contains_point(&Point::from_bits(&[0, 0, 1, 1])));
        assert!(make_b(1).is_err());
        assert!(make_b(9).is_err());
        assert_eq!(make_b(8).unwrap().antecedent().len(), 12870);
    }

    #[test]
    fn make_a_lists() {
        assert_eq!(make_a(2).unwrap(), vec![make_b(2).unwrap()]);
        assert_eq!(make_a(4).unwrap().len(), 3);
        let arities: Vec<_> = make_a(3).unwrap().iter().map(|q| q.arity()).collect();
        assert_eq!(arities, vec![4, 6]);
        assert!(make_a(1).is_err());
    }

    #[test]
    fn preservation_examples() {
        assert!(preserves(&xor2(), &make_b(3).unwrap(), BUDGET).unwrap());
        assert!(!preserves(&xor2(), &make_b(2).unwrap(), BUDGET).unwrap());
        let e1 = BoolFn::projection(2, 0).unwrap();
        assert!(preserves(&e1, &make_b(2).unwrap(), BUDGET).unwrap());
        assert!(matches!(
            preserves(&xor2(), &make_b(3).unwrap(), 10),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn xor_violation_is_lexicographically_first() {
        let q = make_b(2).unwrap();
        let vm = violation_witness(&xor2(), &q, BUDGET).unwrap().unwrap();
        vm.validate(&xor2(), &q).unwrap();
        let rows: Vec<String> = vm.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["(0,0)", "(1,1)", "(0,1)", "(1,0)"]);
        assert_eq!(vm.z(), &Point::from_bits(&[0, 0, 1, 1]));
    }

    #[test]
    fn no_violation_cases() {
        // 6^2 = 36 column pairs, checked by hand-rolled enumeration too.
        let q = make_b(2).unwrap();
        assert!(violation_witness(&and2(), &q, BUDGET).unwrap().is_none());
        let r = q.antecedent().tuples();
        for &c1 in r {
            for &c2 in r {
                let z = c1 & c2;
                assert!(q.consequent().contains(z));
            }
        }
        let e1 = BoolFn::projection(2, 0).unwrap();
        for ell in 2..=3 {
            assert!(violation_witness(&e1, &make_b(ell).unwrap(), BUDGET)
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn sequential_and_parallel_agree_on_witness() {
        let q = make_b(3).unwrap();
        for f in crate::boolfn::all_functions(3).unwrap().iter().step_by(7) {
            let a = violation_witness_with(Exec::Sequential, f, &q, BUDGET).unwrap();
            let b = violation_witness_with(Exec::Parallel, f, &q, BUDGET).unwrap();
            assert_eq!(a, b);
            if let Some(first) = all_violations(f, &q, BUDGET).unwrap().first() {
                assert_eq!(a.as_ref(), Some(first));
            } else {
                assert!(a.is_none());
            }
        }
    }

    #[test]
    fn combinators() {
        let b2 = make_b(2).unwrap();
        let full = extend_consequent(&b2, Relation::full(4).unwrap()).unwrap();
        let empty = restrict_antecedent(&b2, Relation::empty(4).unwrap()).unwrap();
        for f in crate::boolfn::all_functions(2).unwrap() {
            assert!(preserves(&f, &full, BUDGET).unwrap());
            assert!(preserves(&f, &empty, BUDGET).unwrap());
        }
        assert!(extend_consequent(&b2, Relation::empty(4).unwrap()).is_err());
        assert!(restrict_antecedent(&b2, Relation::full(4).unwrap()).is_err());

        let eq = RelationalConstraint::equality();
        let unary = constraint_simple_minor(&eq, &[0, 0], 1, 0).unwrap();
        assert_eq!(unary, RelationalConstraint::relation(Relation::full(1).unwrap()));
        assert!(constraint_simple_minor(&eq, &[0, 2], 2, 0).is_err());
        assert!(constraint_simple_minor(&eq, &[0], 1, 0).is_err());

        let s1 = extend_consequent(&b2, Relation::filter(4, |t| t != 0b0011).unwrap()).unwrap();
        let s2 = extend_consequent(&b2, Relation::filter(4, |t| t != 0b1100).unwrap()).unwrap();
        assert_eq!(intersect_consequents(&s1, &s2).unwrap(), b2);
    }

    #[test]
    fn simple_minor_projection_quantifies() {
        // ∃y (x ≤ y) holds for every x.
        let proj = constraint_simple_minor(&leq(), &[0, 1], 2, 1).unwrap();
        assert_eq!(proj.antecedent(), &Relation::full(1).unwrap());
        // Permuting ≤ gives ≥.
        let geq = constraint_simple_minor(&leq(), &[1, 0], 2, 0).unwrap();
        assert_eq!(geq.antecedent(), &Relation::new(2, [0b00, 0b10, 0b11]).unwrap());
    }

    #[test]
    fn text_formats() {
        let b2 = make_b(2).unwrap();
        assert_eq!(b2.antecedent().to_string(), "4;0,5,6,9,10,15");
        let back: RelationalConstraint = b2.to_string().parse().unwrap();
        assert_eq!(back, b2);
        assert_eq!("2;".parse::<Relation>().unwrap(), Relation::empty(2).unwrap());
        assert!(matches!(
            "2;0,x".parse::<Relation>(),
            Err(Error::Parse { position: 4, .. })
        ));
        assert!("2;4".parse::<Relation>().is_err());
        assert!("2;0|3;0".parse::<RelationalConstraint>().is_err());
    }

    #[test]
    fn pol_examples() {
        let mono = pol_enumerate(&[leq()], 2, BUDGET).unwrap();
        assert_eq!(mono[&1].len(), 3);
        assert_eq!(mono[&2].len(), 6);
        let b2 = pol_enumerate(&[make_b(2).unwrap()], 1, BUDGET).unwrap();
        assert_eq!(b2[&1].len(), 4);
        let all = pol_enumerate(&[], 1, BUDGET).unwrap();
        assert_eq!(all[&1].len(), 4);
        assert!(pol_enumerate(&[], 5, BUDGET).is_err());
    }

    #[test]
    fn forbidden_minor_examples() {
        let b2 = make_b(2).unwrap();
        let got = minimal_forbidden_minors(|f| preserves(f, &b2, BUDGET), 2).unwrap();
        let want: BTreeSet<_> = [xor2(), xnor2()].into_iter().collect();
        assert_eq!(got, want);

        let got = minimal_forbidden_minors(|f| preserves(f, &leq(), BUDGET), 1).unwrap();
        assert_eq!(got, [not()].into_iter().collect());

        assert!(minimal_forbidden_minors(|_| Ok(true), 3).unwrap().is_empty());

        // Not minor-closed: unary members gain a dummy variable and leave.
        let err = minimal_forbidden_minors(|f| Ok(f.arity() == 1 || *f == or2()), 2);
        assert!(matches!(err, Err(Error::Consistency(_))));
    }
}
