// SPDX-License-Identifier: Apache-2.0

//! Truth-table Boolean functions and the minor relation.
//!
//! An `n`-ary function is stored as a `2^n`-bit table. The point
//! `a = (a_0, ..., a_{n-1})` lives at index `Σ a_i · 2^(n-1-i)`, so variable 0
//! is the most significant bit of the index. Variables are 0-based throughout
//! the library.
//!
//! The text form is `<arity>:<hex>`: uppercase hex of the table read as a
//! number (bit `idx` has weight `2^idx`), left-padded to `⌈2^n / 4⌉` digits.
//! `2:8` is conjunction, `3:E8` is the ternary majority.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest arity a table may have.
pub const MAX_ARITY: usize = 24;

/// A tuple of bits. Its length is the arity of whatever it is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<bool>);

impl Point {
    pub fn new(bits: Vec<bool>) -> Self {
        Point(bits)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Point(bits.iter().map(|&b| b != 0).collect())
    }

    /// Decodes a table index into an `arity`-tuple.
    pub fn from_index(idx: usize, arity: usize) -> Self {
        Point((0..arity).map(|i| bit(idx, arity, i)).collect())
    }

    pub fn ones(arity: usize) -> Self {
        Point(vec![true; arity])
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Point {
        Point(self.0.iter().map(|b| !b).collect())
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Point) -> Point {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Point(bits)
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", *b as u8)?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&b| b as u8))
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = raw.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("point entry {bad} is not a bit")));
        }
        Ok(Point::from_bits(&raw))
    }
}

/// Value of variable `i` at table index `idx` of an `arity`-ary function.
#[inline]
pub fn bit(idx: usize, arity: usize, i: usize) -> bool {
    (idx >> (arity - 1 - i)) & 1 == 1
}

/// Index mask selecting variable `i`.
#[inline]
pub fn var_mask(arity: usize, i: usize) -> usize {
    1 << (arity - 1 - i)
}

/// A map `σ: {0..n} → {0..m}` turning an `n`-ary function into an `m`-ary
/// minor `f(a) = g(a ∘ σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorMap {
    target_arity: usize,
    map: Vec<usize>,
}

impl MinorMap {
    pub fn new(map: Vec<usize>, target_arity: usize) -> Result<Self> {
        if target_arity == 0 {
            return Err(Error::domain("minor target arity must be at least 1"));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= target_arity) {
            return Err(Error::domain(format!(
                "minor map image {bad} outside 0..{target_arity}"
            )));
        }
        Ok(MinorMap { target_arity, map })
    }

    /// `δ_I` for `I = {i, j}`: positions before `max I` stay, `max I` goes to
    /// `min I`, later positions shift down by one.
    pub fn identification(arity: usize, i: usize, j: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::domain("identification minors need arity at least 2"));
        }
        if i == j || i >= arity || j >= arity {
            return Err(Error::domain(format!(
                "{{{i}, {j}}} is not a pair of distinct variables of an {arity}-ary function"
            )));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let map = (0..arity)
            .map(|k| match k.cmp(&hi) {
                Ordering::Less => k,
                Ordering::Equal => lo,
                Ordering::Greater => k - 1,
            })
            .collect();
        MinorMap::new(map, arity - 1)
    }

    pub fn source_arity(&self) -> usize {
        self.map.len()
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self` then `then`: the map `then ∘ self`, so that
    /// `minor(minor(g, self), then) = minor(g, self.compose(then))`.
    pub fn compose(&self, then: &MinorMap) -> Result<MinorMap> {
        Error::check_dim(self.target_arity, then.source_arity())?;
        MinorMap::new(
            self.map.iter().map(|&j| then.map[j]).collect(),
            then.target_arity,
        )
    }
}

/// An `n`-ary Boolean function as a packed truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolFn {
    arity: usize,
    words: Vec<u64>,
}

fn word_count(arity: usize) -> usize {
    (1usize << arity).div_ceil(64)
}

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 {
        return Err(Error::domain("arity must be at least 1"));
    }
    Error::check_budget("truth table arity", arity as u128, MAX_ARITY as u128)
}

impl BoolFn {
    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    /// Builds the table of `arity` from a predicate on indices.
    pub fn from_fn<F>(arity: usize, f: F) -> Result<Self>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        Self::from_fn_with(Exec::default(), arity, f)
    }

    pub fn from_fn_with<F>(exec: Exec, arity: usize, f: F) -> Result<Self>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        check_arity(arity)?;
        let size = 1usize << arity;
        let words = exec.map_collect(0..word_count(arity), |w| {
            let base = w * 64;
            let end = (base + 64).min(size);
            (base..end).fold(0u64, |acc, idx| acc | ((f(idx) as u64) << (idx - base)))
        });
        Ok(BoolFn { arity, words })
    }

    /// Table from values listed in index order.
    pub fn from_values(arity: usize, values: &[bool]) -> Result<Self> {
        check_arity(arity)?;
        Error::check_dim(1 << arity, values.len())?;
        Self::from_fn_with(Exec::Sequential, arity, |idx| values[idx])
    }

    /// `e^(n)_i`, 0-based.
    pub fn projection(arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::domain(format!("projection index {i} out of range")));
        }
        Self::from_fn(arity, |idx| bit(idx, arity, i))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of points, `2^arity`.
    pub fn size(&self) -> usize {
        1 << self.arity
    }

    #[inline]
    pub fn value(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn eval(&self, a: &Point) -> Result<bool> {
        Error::check_dim(self.arity, a.len())?;
        Ok(self.value(a.index()))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn true_indices(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.value(i)).collect()
    }

    pub fn false_indices(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| !self.value(i)).collect()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.size()
    }

    /// Minor `f(a) = g(a ∘ σ)` of arity `σ.target_arity()`.
    pub fn minor(&self, sigma: &MinorMap) -> Result<BoolFn> {
        Error::check_dim(self.arity, sigma.source_arity())?;
        let (n, m) = (self.arity, sigma.target_arity());
        BoolFn::from_fn(m, |a| {
            let src = (0..n).fold(0usize, |acc, i| {
                (acc << 1) | bit(a, m, sigma.image(i)) as usize
            });
            self.value(src)
        })
    }

    /// `f_I` for the pair `{i, j}` of (0-based) variables.
    pub fn identification_minor(&self, i: usize, j: usize) -> Result<BoolFn> {
        self.minor(&MinorMap::identification(self.arity, i, j)?)
    }

    /// All identification minors, keyed by their pair `(i, j)` with `i < j`.
    pub fn identification_minors(&self) -> Result<Vec<((usize, usize), BoolFn)>> {
        (0..self.arity)
            .tuple_combinations()
            .map(|(i, j)| Ok(((i, j), self.identification_minor(i, j)?)))
            .collect()
    }

    /// `x ↦ ¬f(¬x)`.
    pub fn dual(&self) -> BoolFn {
        let top = self.size() - 1;
        BoolFn::from_fn(self.arity, |idx| !self.value(top ^ idx)).expect("same arity")
    }

    pub fn negate(&self) -> BoolFn {
        BoolFn::from_fn(self.arity, |idx| !self.value(idx)).expect("same arity")
    }

    /// `f^u(a) = f(a ⊕ u)`.
    pub fn shift(&self, u: &Point) -> Result<BoolFn> {
        Error::check_dim(self.arity, u.len())?;
        let mask = u.index();
        BoolFn::from_fn(self.arity, |idx| self.value(idx ^ mask))
    }

    pub fn is_essential(&self, i: usize) -> bool {
        let m = var_mask(self.arity, i);
        (0..self.size())
            .filter(|idx| idx & m == 0)
            .any(|idx| self.value(idx) != self.value(idx | m))
    }

    pub fn essential_variables(&self) -> Vec<usize> {
        (0..self.arity).filter(|&i| self.is_essential(i)).collect()
    }

    /// Restriction to the essential variables, in their original order. A
    /// constant comes back as a unary constant.
    pub fn essential_core(&self) -> BoolFn {
        let ess = self.essential_variables();
        if ess.is_empty() {
            return BoolFn::constant(1, self.value(0)).expect("arity 1");
        }
        let e = ess.len();
        BoolFn::from_fn(e, |b| {
            let src = ess
                .iter()
                .enumerate()
                .filter(|&(k, _)| bit(b, e, k))
                .fold(0usize, |acc, (_, &v)| acc | var_mask(self.arity, v));
            self.value(src)
        })
        .expect("smaller arity")
    }

    /// Canonical representative of the `≡` class: delete inessential
    /// variables, then take the least table over all variable permutations.
    pub fn canonical_form(&self) -> BoolFn {
        let core = self.essential_core();
        let n = core.arity;
        if n == 1 {
            return core;
        }
        (0..n)
            .permutations(n)
            .map(|perm| {
                core.minor(&MinorMap::new(perm, n).expect("permutation"))
                    .expect("arity")
            })
            .min()
            .expect("at least one permutation")
    }

    pub fn is_equivalent(&self, other: &BoolFn) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Whether `self ≤ g`, by trying every `σ: [arity g] → [arity self]`.
    pub fn is_minor_of(&self, g: &BoolFn, budget: u128) -> Result<bool> {
        let (m, n) = (self.arity, g.arity);
        let maps = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        Error::check_budget("minor maps", maps, budget)?;
        let found = Exec::default().find_map_first(0..maps as usize, |code| {
            let mut rest = code;
            let map = (0..n)
                .map(|_| {
                    let d = rest % m;
                    rest /= m;
                    d
                })
                .collect();
            let sigma = MinorMap::new(map, m).expect("digits below m");
            (g.minor(&sigma).expect("arity matches") == *self).then_some(())
        });
        Ok(found.is_some())
    }

    /// Uppercase hex of the table, most significant nibble first.
    pub fn to_hex(&self) -> String {
        let digits = self.size().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .map(|b| d * 4 + b)
                    .filter(|&idx| idx < self.size() && self.value(idx))
                    .fold(0u32, |acc, idx| acc | 1 << (idx % 4));
                char::from_digit(nibble, 16).unwrap().to_ascii_uppercase()
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (arity_text, hex) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(0, "expected `<arity>:<hex>`"))?;
        let arity: usize = arity_text
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad arity `{arity_text}`")))?;
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::parse(0, format!("arity {arity} outside 1..={MAX_ARITY}")));
        }
        let offset = arity_text.len() + 1;
        let size = 1usize << arity;
        let digits = size.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::parse(
                offset,
                format!("arity {arity} needs {digits} hex digits, found {}", hex.len()),
            ));
        }
        let mut values = vec![false; size];
        for (pos, ch) in hex.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::parse(offset + pos, format!("`{ch}` is not a hex digit")))?
                as usize;
            let d = digits - 1 - pos;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let idx = d * 4 + b;
                    if idx >= size {
                        return Err(Error::parse(
                            offset + pos,
                            "digit sets bits beyond the table",
                        ));
                    }
                    values[idx] = true;
                }
            }
        }
        BoolFn::from_values(arity, &values)
    }
}

impl fmt::Display for BoolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.arity, self.to_hex())
    }
}

impl fmt::Debug for BoolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolFn({self})")
    }
}

impl FromStr for BoolFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoolFn::parse(s)
    }
}

impl Serialize for BoolFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BoolFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        BoolFn::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Arity first, then the table read as a number.
impl Ord for BoolFn {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity
            .cmp(&other.arity)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BoolFn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `2^(2^n)` functions of arity `n` (`n ≤ 4`), in table order.
pub fn all_functions(arity: usize) -> Result<Vec<BoolFn>> {
    if arity == 0 || arity > 4 {
        return Err(Error::Resource {
            what: "exhaustive function enumeration arity",
            needed: arity as u128,
            budget: 4,
        });
    }
    let size = 1usize << arity;
    Ok((0..1u64 << size)
        .map(|code| BoolFn {
            arity,
            words: vec![code],
        })
        .collect())
}

/// Named functions used throughout tests and reports.
pub mod named {
    use super::BoolFn;

    fn p(s: &str) -> BoolFn {
        BoolFn::parse(s).expect("valid literal")
    }

    pub fn identity() -> BoolFn {
        p("1:2")
    }
    pub fn not() -> BoolFn {
        p("1:1")
    }
    pub fn and2() -> BoolFn {
        p("2:8")
    }
    pub fn or2() -> BoolFn {
        p("2:E")
    }
    pub fn xor2() -> BoolFn {
        p("2:6")
    }
    pub fn xnor2() -> BoolFn {
        p("2:9")
    }
    pub fn maj3() -> BoolFn {
        p("3:E8")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn pt(bits: &[u8]) -> Point {
        Point::from_bits(bits)
    }

    #[test]
    fn eval_examples() {
        assert!(and2().eval(&pt(&[1, 1])).unwrap());
        assert!(xor2().eval(&pt(&[1, 0])).unwrap());
        assert!(!and2().eval(&pt(&[0, 1])).unwrap());
        assert_eq!(
            and2().eval(&pt(&[1])),
            Err(Error::Dimension {
                expected: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn minor_examples() {
        let diag = MinorMap::new(vec![0, 0], 1).unwrap();
        assert_eq!(and2().minor(&diag).unwrap(), identity());
        assert_eq!(xor2().minor(&diag).unwrap().to_string(), "1:0");
        let swap = MinorMap::new(vec![1, 0], 2).unwrap();
        let e1 = BoolFn::projection(2, 0).unwrap();
        let e2 = BoolFn::projection(2, 1).unwrap();
        assert_eq!(e1.minor(&swap).unwrap(), e2);
        assert!(MinorMap::new(vec![0, 2], 2).is_err());
        assert!(and2().minor(&MinorMap::new(vec![0], 1).unwrap()).is_err());
    }

    #[test]
    fn identification_minor_examples() {
        assert_eq!(xor2().identification_minor(0, 1).unwrap().to_string(), "1:0");
        assert_eq!(and2().identification_minor(0, 1).unwrap(), identity());
        // maj3(x, x, y) = x at all four points.
        let g = maj3().identification_minor(0, 1).unwrap();
        assert_eq!(g, BoolFn::projection(2, 0).unwrap());
        for idx in 0..4 {
            let (x, y) = (bit(idx, 2, 0), bit(idx, 2, 1));
            let v = maj3().eval(&Point::new(vec![x, x, y])).unwrap();
            assert_eq!(g.value(idx), v);
        }
        assert!(identity().identification_minor(0, 1).is_err());
        assert!(maj3().identification_minor(1, 1).is_err());
        assert!(maj3().identification_minor(0, 3).is_err());
    }

    #[test]
    fn delta_matches_displayed_rule() {
        let d = MinorMap::identification(5, 3, 1).unwrap();
        assert_eq!(d.as_slice(), &[0, 1, 2, 1, 3]);
        assert_eq!(d.target_arity(), 4);
    }

    #[test]
    fn is_minor_of_examples() {
        assert!(identity().is_minor_of(&and2(), 1 << 20).unwrap());
        assert!(xor2().is_minor_of(&xor2(), 1 << 20).unwrap());
        assert!(!not().is_minor_of(&and2(), 1 << 20).unwrap());
        assert!(matches!(
            maj3().is_minor_of(&maj3(), 10),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn dual_negate_shift_examples() {
        assert_eq!(and2().dual(), or2());
        assert_eq!(maj3().negate().negate(), maj3());
        assert_eq!(xor2().shift(&pt(&[1, 0])).unwrap(), xnor2());
        assert!(xor2().shift(&pt(&[1])).is_err());
    }

    #[test]
    fn essential_variable_examples() {
        assert_eq!(and2().essential_variables(), vec![0, 1]);
        assert!(BoolFn::constant(3, false).unwrap().essential_variables().is_empty());
        assert_eq!(maj3().essential_variables(), vec![0, 1, 2]);
    }

    #[test]
    fn text_format() {
        assert_eq!(and2().to_string(), "2:8");
        assert_eq!(maj3().to_string(), "3:E8");
        assert_eq!(BoolFn::parse("3:e8").unwrap(), maj3());
        assert_eq!(identity().to_string(), "1:2");
        assert_eq!(BoolFn::projection(4, 0).unwrap().to_string(), "4:FF00");
        assert!(matches!(
            BoolFn::parse("2:G1"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(matches!(
            BoolFn::parse("2:G"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(BoolFn::parse("1:4").is_err());
        assert!(BoolFn::parse("28").is_err());
        assert!(BoolFn::parse("0:1").is_err());
    }

    #[test]
    fn canonical_forms() {
        // x ∧ y padded with a dummy in the middle.
        let padded = and2()
            .minor(&MinorMap::new(vec![0, 2], 3).unwrap())
            .unwrap();
        assert_eq!(padded.canonical_form(), and2());
        assert!(padded.is_equivalent(&and2()));
        assert_eq!(BoolFn::constant(3, true).unwrap().canonical_form().to_string(), "1:3");
        let x_and_not_y = BoolFn::parse("2:4").unwrap();
        let not_x_and_y = BoolFn::parse("2:2").unwrap();
        assert_eq!(x_and_not_y.canonical_form(), not_x_and_y.canonical_form());
    }

    #[test]
    fn ordering_is_arity_then_table() {
        assert!(BoolFn::parse("1:3").unwrap() < BoolFn::parse("2:0").unwrap());
        assert!(and2() < xnor2());
        let big_a = BoolFn::constant(7, false).unwrap();
        let big_b = BoolFn::projection(7, 6).unwrap();
        assert!(big_a < big_b);
    }

    #[test]
    fn arity_limits() {
        assert!(BoolFn::constant(0, true).is_err());
        assert!(matches!(
            BoolFn::constant(MAX_ARITY + 1, true),
            Err(Error::Resource { .. })
        ));
        assert_eq!(all_functions(2).unwrap().len(), 16);
        assert!(all_functions(5).is_err());
    }
}
