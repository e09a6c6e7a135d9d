// SPDX-License-Identifier: Apache-2.0

//! Post's lattice: membership in every clone of Boolean functions, decided
//! from the definitions, and the relations characterizing each clone.
//!
//! Every clone is an intersection of a few base clones (`T0`, `T1`, `M`, `S`,
//! `L`, `U_m`, `W_m`, `Λ`, `V`, `Ω(1)`). Membership and characterizing
//! constraints are both derived from that decomposition, so the two views can
//! be cross-checked against each other.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boolfn::{var_mask, BoolFn};
use crate::constraints::{preserves_all, Relation, RelationalConstraint, MAX_RELATION_ARITY};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default largest rank materialized for `U_∞` and `W_∞`.
pub const DEFAULT_RANK_BOUND: usize = 4;

/// Separation rank: `m ≥ 2` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl Rank {
    pub fn finite(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!("separation rank must be >= 2, got {m}")));
        }
        Ok(Rank::Finite(m))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(m) => write!(f, "{m}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// A clone of Boolean functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CloneId {
    Omega,
    T0,
    T1,
    Tc,
    M,
    M0,
    M1,
    Mc,
    S,
    Sc,
    SM,
    L,
    L0,
    L1,
    LS,
    Lc,
    U(Rank),
    W(Rank),
    TcU(Rank),
    TcW(Rank),
    MU(Rank),
    MW(Rank),
    McU(Rank),
    McW(Rank),
    Lambda,
    Lambda0,
    Lambda1,
    Lambdac,
    V,
    V0,
    V1,
    Vc,
    Omega1,
    IStar,
    I,
    I0,
    I1,
    Ic,
}

/// The clones every other clone is an intersection of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseClone {
    T0,
    T1,
    M,
    S,
    L,
    U(Rank),
    W(Rank),
    Lambda,
    V,
    Omega1,
}

const PLAIN: [(CloneId, &str); 30] = [
    (CloneId::Omega, "Omega"),
    (CloneId::T0, "T0"),
    (CloneId::T1, "T1"),
    (CloneId::Tc, "Tc"),
    (CloneId::M, "M"),
    (CloneId::M0, "M0"),
    (CloneId::M1, "M1"),
    (CloneId::Mc, "Mc"),
    (CloneId::S, "S"),
    (CloneId::Sc, "Sc"),
    (CloneId::SM, "SM"),
    (CloneId::L, "L"),
    (CloneId::L0, "L0"),
    (CloneId::L1, "L1"),
    (CloneId::LS, "LS"),
    (CloneId::Lc, "Lc"),
    (CloneId::Lambda, "Lam"),
    (CloneId::Lambda0, "Lam0"),
    (CloneId::Lambda1, "Lam1"),
    (CloneId::Lambdac, "Lamc"),
    (CloneId::V, "V"),
    (CloneId::V0, "V0"),
    (CloneId::V1, "V1"),
    (CloneId::Vc, "Vc"),
    (CloneId::Omega1, "Omega1"),
    (CloneId::IStar, "Istar"),
    (CloneId::I, "I"),
    (CloneId::I0, "I0"),
    (CloneId::I1, "I1"),
    (CloneId::Ic, "Ic"),
];

type Family = fn(Rank) -> CloneId;

const FAMILIES: [(&str, Family); 8] = [
    ("McU", CloneId::McU),
    ("McW", CloneId::McW),
    ("TcU", CloneId::TcU),
    ("TcW", CloneId::TcW),
    ("MU", CloneId::MU),
    ("MW", CloneId::MW),
    ("U", CloneId::U),
    ("W", CloneId::W),
];

impl CloneId {
    /// Every clone, with the rank families instantiated at `2..=rank_bound`
    /// and `∞`.
    pub fn catalogue(rank_bound: usize) -> Vec<CloneId> {
        let ranks: Vec<Rank> = (2..=rank_bound)
            .map(Rank::Finite)
            .chain([Rank::Infinite])
            .collect();
        let mut out: Vec<CloneId> = PLAIN.iter().map(|&(c, _)| c).collect();
        for &(_, family) in &FAMILIES {
            out.extend(ranks.iter().map(|&r| family(r)));
        }
        out.sort();
        out
    }

    /// The rank of a separation family, if this is one.
    pub fn rank(&self) -> Option<Rank> {
        match *self {
            CloneId::U(r)
            | CloneId::W(r)
            | CloneId::TcU(r)
            | CloneId::TcW(r)
            | CloneId::MU(r)
            | CloneId::MW(r)
            | CloneId::McU(r)
            | CloneId::McW(r) => Some(r),
            _ => None,
        }
    }

    /// The base clones whose intersection this clone is, in catalogue order.
    pub fn components(&self) -> Vec<BaseClone> {
        use BaseClone as B;
        match *self {
            CloneId::Omega => vec![],
            CloneId::T0 => vec![B::T0],
            CloneId::T1 => vec![B::T1],
            CloneId::Tc => vec![B::T0, B::T1],
            CloneId::M => vec![B::M],
            CloneId::M0 => vec![B::T0, B::M],
            CloneId::M1 => vec![B::T1, B::M],
            CloneId::Mc => vec![B::T0, B::T1, B::M],
            CloneId::S => vec![B::S],
            CloneId::Sc => vec![B::T0, B::T1, B::S],
            CloneId::SM => vec![B::M, B::S],
            CloneId::L => vec![B::L],
            CloneId::L0 => vec![B::T0, B::L],
            CloneId::L1 => vec![B::T1, B::L],
            CloneId::LS => vec![B::S, B::L],
            CloneId::Lc => vec![B::T0, B::T1, B::L],
            CloneId::U(r) => vec![B::U(r)],
            CloneId::W(r) => vec![B::W(r)],
            CloneId::TcU(r) => vec![B::T0, B::T1, B::U(r)],
            CloneId::TcW(r) => vec![B::T0, B::T1, B::W(r)],
            CloneId::MU(r) => vec![B::M, B::U(r)],
            CloneId::MW(r) => vec![B::M, B::W(r)],
            CloneId::McU(r) => vec![B::T0, B::T1, B::M, B::U(r)],
            CloneId::McW(r) => vec![B::T0, B::T1, B::M, B::W(r)],
            CloneId::Lambda => vec![B::Lambda],
            CloneId::Lambda0 => vec![B::T0, B::Lambda],
            CloneId::Lambda1 => vec![B::T1, B::Lambda],
            CloneId::Lambdac => vec![B::T0, B::T1, B::Lambda],
            CloneId::V => vec![B::V],
            CloneId::V0 => vec![B::T0, B::V],
            CloneId::V1 => vec![B::T1, B::V],
            CloneId::Vc => vec![B::T0, B::T1, B::V],
            CloneId::Omega1 => vec![B::Omega1],
            CloneId::IStar => vec![B::S, B::Omega1],
            CloneId::I => vec![B::M, B::Omega1],
            CloneId::I0 => vec![B::T0, B::M, B::Omega1],
            CloneId::I1 => vec![B::T1, B::M, B::Omega1],
            CloneId::Ic => vec![B::T0, B::T1, B::M, B::Omega1],
        }
    }
}

impl fmt::Display for CloneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(&(_, name)) = PLAIN.iter().find(|(c, _)| c == self) {
            return f.write_str(name);
        }
        let rank = self.rank().expect("non-plain clones are rank families");
        let (prefix, _) = FAMILIES
            .iter()
            .find(|(_, family)| family(rank) == *self)
            .expect("every family is listed");
        write!(f, "{prefix}{rank}")
    }
}

impl FromStr for CloneId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(&(c, _)) = PLAIN.iter().find(|(_, name)| *name == s) {
            return Ok(c);
        }
        for &(prefix, family) in &FAMILIES {
            let Some(rest) = s.strip_prefix(prefix) else {
                continue;
            };
            if rest == "inf" {
                return Ok(family(Rank::Infinite));
            }
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let m: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(prefix.len(), "rank out of range"))?;
                return Rank::finite(m)
                    .map(family)
                    .map_err(|_| Error::parse(prefix.len(), "rank must be >= 2"));
            }
        }
        Err(Error::parse(0, format!("unknown clone `{s}`")))
    }
}

impl Serialize for CloneId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CloneId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `f` is monotone: no single-bit increase lowers the value.
pub fn is_monotone(f: &BoolFn) -> bool {
    is_monotone_with(Exec::default(), f)
}

pub fn is_monotone_with(exec: Exec, f: &BoolFn) -> bool {
    let n = f.arity();
    exec.all(0..f.size(), |idx| {
        !f.value(idx) || (0..n).all(|i| f.value(idx | var_mask(n, i)))
    })
}

/// `f = f^d`, i.e. `f(ā) = ¬f(a)` everywhere.
pub fn is_self_dual(f: &BoolFn) -> bool {
    let top = f.size() - 1;
    Exec::default().all(0..f.size() / 2, |idx| f.value(idx) != f.value(top - idx))
}

/// Algebraic normal form coefficients (Möbius transform over GF(2)), indexed
/// like the truth table: coefficient `idx` belongs to the monomial of the
/// variables set in `idx`.
pub fn anf(f: &BoolFn) -> Vec<bool> {
    let mut c: Vec<bool> = (0..f.size()).map(|i| f.value(i)).collect();
    let mut step = 1;
    while step < c.len() {
        for block in (0..c.len()).step_by(2 * step) {
            for i in block..block + step {
                c[i + step] ^= c[i];
            }
        }
        step *= 2;
    }
    c
}

/// `f = c_0 ⊕ c_1 x_1 ⊕ … ⊕ c_n x_n`.
pub fn is_linear(f: &BoolFn) -> bool {
    anf(f)
        .iter()
        .enumerate()
        .all(|(idx, &c)| !c || idx.count_ones() <= 1)
}

fn essential_mask(f: &BoolFn) -> usize {
    let n = f.arity();
    f.essential_variables()
        .into_iter()
        .fold(0, |m, i| m | var_mask(n, i))
}

/// A constant, or the conjunction of its essential variables.
pub fn is_conjunction(f: &BoolFn) -> bool {
    let mask = essential_mask(f);
    f.is_constant() || (0..f.size()).all(|idx| f.value(idx) == (idx & mask == mask))
}

/// A constant, or the disjunction of its essential variables.
pub fn is_disjunction(f: &BoolFn) -> bool {
    let mask = essential_mask(f);
    f.is_constant() || (0..f.size()).all(|idx| f.value(idx) == (idx & mask != 0))
}

/// At most one essential variable: a projection, negation or constant.
pub fn is_essentially_unary(f: &BoolFn) -> bool {
    f.essential_variables().len() <= 1
}

/// Size of the smallest subset of `masks` whose bitwise AND is zero, or
/// `None` when the AND of all of them is nonzero (or there are none).
/// Searches at most `cap` levels deep.
fn smallest_disjoint_subset(masks: &[usize], width: usize, cap: usize) -> Option<usize> {
    let mut distinct = masks.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.is_empty() || distinct.iter().fold(!0usize, |a, &m| a & m) != 0 {
        return None;
    }
    let mut seen = vec![false; 1 << width];
    let mut frontier = Vec::new();
    for &m in &distinct {
        if !seen[m] {
            seen[m] = true;
            frontier.push(m);
        }
    }
    let mut depth = 1;
    while depth <= cap {
        if seen[0] {
            return Some(depth);
        }
        let mut next = Vec::new();
        for &r in &frontier {
            for &m in &distinct {
                let x = r & m;
                if !seen[x] {
                    seen[x] = true;
                    next.push(x);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    // Deeper than the cap: the caller only asks whether `cap` is exceeded.
    Some(cap + 1)
}

/// `f` is `a`-separating of the given rank: every subset of `f⁻¹(a)` of size
/// at most `m` (or all of it, for `∞`) has a common coordinate equal to `a`.
pub fn is_separating(f: &BoolFn, a: bool, rank: Rank) -> bool {
    let n = f.arity();
    let full = (1usize << n) - 1;
    // Work with masks in which a set bit means "coordinate equals a".
    let masks: Vec<usize> = (0..f.size())
        .filter(|&idx| f.value(idx) == a)
        .map(|idx| if a { idx } else { !idx & full })
        .collect();
    match rank {
        Rank::Infinite => masks.iter().fold(full, |acc, &m| acc & m) != 0 || masks.is_empty(),
        Rank::Finite(m) => match smallest_disjoint_subset(&masks, n, m) {
            None => true,
            Some(k) => k > m,
        },
    }
}

impl BaseClone {
    pub fn contains(&self, f: &BoolFn) -> bool {
        let top = f.size() - 1;
        match *self {
            BaseClone::T0 => !f.value(0),
            BaseClone::T1 => f.value(top),
            BaseClone::M => is_monotone(f),
            BaseClone::S => is_self_dual(f),
            BaseClone::L => is_linear(f),
            BaseClone::U(r) => is_separating(f, true, r),
            BaseClone::W(r) => is_separating(f, false, r),
            BaseClone::Lambda => is_conjunction(f),
            BaseClone::V => is_disjunction(f),
            BaseClone::Omega1 => is_essentially_unary(f),
        }
    }

    /// The characterizing relations, with `U_∞`/`W_∞` cut off at
    /// `rank_bound`. The flag reports whether a cut happened.
    pub fn relations(&self, rank_bound: usize) -> Result<(Vec<Relation>, bool)> {
        let single = |r: Result<Relation>| r.map(|r| (vec![r], false));
        match *self {
            BaseClone::T0 => single(Relation::new(1, [0])),
            BaseClone::T1 => single(Relation::new(1, [1])),
            BaseClone::M => single(Relation::new(2, [0b00, 0b01, 0b11])),
            BaseClone::S => single(Relation::new(2, [0b01, 0b10])),
            BaseClone::L => single(Relation::filter(4, |t| t.count_ones() % 2 == 0)),
            BaseClone::U(Rank::Finite(m)) => single(separation_relation(true, m)),
            BaseClone::W(Rank::Finite(m)) => single(separation_relation(false, m)),
            BaseClone::U(Rank::Infinite) | BaseClone::W(Rank::Infinite) => {
                let a = matches!(self, BaseClone::U(_));
                let rels = (2..=rank_bound)
                    .map(|m| separation_relation(a, m))
                    .collect::<Result<Vec<_>>>()?;
                Ok((rels, true))
            }
            BaseClone::Lambda => single(Relation::filter(3, |t| (t >> 2) & (t >> 1) & 1 == t & 1)),
            BaseClone::V => single(Relation::filter(3, |t| ((t >> 2) | (t >> 1)) & 1 == t & 1)),
            BaseClone::Omega1 => single(Relation::filter(3, |t| {
                let (a, b, c) = (t >> 2 & 1, t >> 1 & 1, t & 1);
                a == b || b == c
            })),
        }
    }
}

/// `B^m ∖ {a^m}`, the relation preserved by the `a`-separating functions of
/// rank `m`.
fn separation_relation(a: bool, m: usize) -> Result<Relation> {
    if !(2..=MAX_RELATION_ARITY).contains(&m) {
        return Err(Error::domain(format!(
            "separation relations are materialized for 2 <= m <= {MAX_RELATION_ARITY}, got {m}"
        )));
    }
    let all_a = if a { (1u32 << m) - 1 } else { 0 };
    Relation::filter(m, |t| t != all_a)
}

/// Membership by the direct definition of every component.
pub fn is_member(f: &BoolFn, c: CloneId) -> bool {
    c.components().iter().all(|b| b.contains(f))
}

/// Constraints `(R, R)` characterizing a clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizingSet {
    pub constraints: Vec<RelationalConstraint>,
    /// The `U_∞`/`W_∞` family was cut at the rank bound. Such a set is exact
    /// on functions of arity at most the bound.
    pub truncated: bool,
}

pub fn characterizing_constraints(c: CloneId, rank_bound: usize) -> Result<CharacterizingSet> {
    let mut constraints = Vec::new();
    let mut truncated = false;
    for b in c.components() {
        let (rels, cut) = b.relations(rank_bound)?;
        truncated |= cut;
        constraints.extend(rels.into_iter().map(RelationalConstraint::relation));
    }
    Ok(CharacterizingSet {
        constraints,
        truncated,
    })
}

/// Decides membership both ways and fails with a consistency error if the
/// two disagree.
pub fn membership_crosscheck(
    f: &BoolFn,
    c: CloneId,
    rank_bound: usize,
    budget: u128,
) -> Result<bool> {
    let set = characterizing_constraints(c, rank_bound)?;
    if set.truncated && f.arity() > rank_bound {
        return Err(Error::domain(format!(
            "rank bound {rank_bound} is below arity {}; the truncated family is not exact",
            f.arity()
        )));
    }
    let direct = is_member(f, c);
    let relational = preserves_all(f, &set.constraints, budget)?;
    if direct != relational {
        return Err(Error::Consistency(format!(
            "{f} in {c}: definition says {direct}, relations say {relational}"
        )));
    }
    Ok(direct)
}
