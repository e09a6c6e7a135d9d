// SPDX-License-Identifier: Apache-2.0

//! Constructions `G_C(f)` moving an arbitrary function into the clones `S`,
//! `Mc`, `SM`, `U∞`, `McU∞` and `McW∞` while keeping every `B_ℓ` verdict, and
//! the transport of `B_ℓ` violations between `f` and `G_C(f)`.
//!
//! Throughout, the added variable `x_{n+1}` is the last one, i.e. the least
//! significant bit of the table index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::asummability::AsummabilityWitness;
use crate::boolfn::{BoolFn, Point};
use crate::clones::{CloneId, Rank};
use crate::constraints::ViolationMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstructionTag {
    Gs,
    Gmc,
    Gsm,
    Guinf,
    GmcUinf,
    GmcWinf,
}

const TAG_NAMES: [(ConstructionTag, &str); 6] = [
    (ConstructionTag::Gs, "gs"),
    (ConstructionTag::Gmc, "gmc"),
    (ConstructionTag::Gsm, "gsm"),
    (ConstructionTag::Guinf, "guinf"),
    (ConstructionTag::GmcUinf, "gmcuinf"),
    (ConstructionTag::GmcWinf, "gmcwinf"),
];

impl ConstructionTag {
    pub const ALL: [ConstructionTag; 6] = [
        ConstructionTag::Gs,
        ConstructionTag::Gmc,
        ConstructionTag::Gsm,
        ConstructionTag::Guinf,
        ConstructionTag::GmcUinf,
        ConstructionTag::GmcWinf,
    ];

    /// The clone the construction lands in.
    pub fn target(&self) -> CloneId {
        match self {
            ConstructionTag::Gs => CloneId::S,
            ConstructionTag::Gmc => CloneId::Mc,
            ConstructionTag::Gsm => CloneId::SM,
            ConstructionTag::Guinf => CloneId::U(Rank::Infinite),
            ConstructionTag::GmcUinf => CloneId::McU(Rank::Infinite),
            ConstructionTag::GmcWinf => CloneId::McW(Rank::Infinite),
        }
    }

    pub fn target_arity(&self, n: usize) -> usize {
        match self {
            ConstructionTag::Gs | ConstructionTag::Guinf => n + 1,
            ConstructionTag::Gmc => 2 * n,
            ConstructionTag::Gsm => 2 * (n + 1),
            ConstructionTag::GmcUinf | ConstructionTag::GmcWinf => 2 * n + 1,
        }
    }

    pub fn apply(&self, f: &BoolFn) -> Result<BoolFn> {
        match self {
            ConstructionTag::Gs => g_s(f),
            ConstructionTag::Gmc => g_mc(f),
            ConstructionTag::Gsm => g_sm(f),
            ConstructionTag::Guinf => g_uinf(f),
            ConstructionTag::GmcUinf => g_mc_uinf(f),
            ConstructionTag::GmcWinf => g_mc_winf(f),
        }
    }
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (_, name) = TAG_NAMES.iter().find(|(t, _)| t == self).expect("all tags named");
        f.write_str(name)
    }
}

impl FromStr for ConstructionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TAG_NAMES
            .iter()
            .find(|(_, name)| name.eq_ignore_ascii_case(s))
            .map(|&(t, _)| t)
            .ok_or_else(|| Error::parse(0, format!("unknown construction `{s}`")))
    }
}

impl Serialize for ConstructionTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConstructionTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `(x_{n+1} ∧ f(x)) ∨ (¬x_{n+1} ∧ f^d(x))`.
pub fn g_s(f: &BoolFn) -> Result<BoolFn> {
    let top = f.size() - 1;
    BoolFn::from_fn(f.arity() + 1, |idx| {
        let x = idx >> 1;
        if idx & 1 == 1 {
            f.value(x)
        } else {
            !f.value(top - x)
        }
    })
}

/// The arity-`2n` monotone, constant-preserving lift of `f`.
///
/// With `x = (a, b)` split into halves: weight below `n` gives 0, above `n`
/// gives 1, `b = ā` gives `f(a)`, and otherwise `x_i` for the first `i` with
/// `a_i = b_i`.
pub fn g_mc(f: &BoolFn) -> Result<BoolFn> {
    let n = f.arity();
    let mask = (1usize << n) - 1;
    BoolFn::from_fn(2 * n, |idx| {
        let w = idx.count_ones() as usize;
        if w != n {
            return w > n;
        }
        let (a, b) = (idx >> n, idx & mask);
        let eq = !(a ^ b) & mask;
        if eq == 0 {
            f.value(a)
        } else {
            // Variable 0 is the most significant bit, so the first equal
            // position is the highest set bit of `eq`.
            let pos = usize::BITS - 1 - eq.leading_zeros();
            (a >> pos) & 1 == 1
        }
    })
}

/// `G_Mc(G_S(f))`.
pub fn g_sm(f: &BoolFn) -> Result<BoolFn> {
    g_mc(&g_s(f)?)
}

/// `x_{n+1} ∧ f(x)`.
pub fn g_uinf(f: &BoolFn) -> Result<BoolFn> {
    BoolFn::from_fn(f.arity() + 1, |idx| idx & 1 == 1 && f.value(idx >> 1))
}

/// `G_U∞(G_Mc(f))`.
pub fn g_mc_uinf(f: &BoolFn) -> Result<BoolFn> {
    g_uinf(&g_mc(f)?)
}

/// The dual of `G_McU∞(f)`.
pub fn g_mc_winf(f: &BoolFn) -> Result<BoolFn> {
    Ok(g_mc_uinf(f)?.dual())
}

fn map_points(
    w: &AsummabilityWitness,
    map_false: impl Fn(&Point) -> Point,
    map_true: impl Fn(&Point) -> Point,
) -> Result<AsummabilityWitness> {
    AsummabilityWitness::new(
        w.ell(),
        w.false_points().iter().map(map_false).collect(),
        w.true_points().iter().map(map_true).collect(),
    )
}

fn append_one(p: &Point) -> Point {
    let mut q = p.clone();
    q.push(true);
    q
}

fn with_complement(p: &Point) -> Point {
    p.concat(&p.complement())
}

/// One construction step, without validation.
fn step_up(w: &AsummabilityWitness, tag: ConstructionTag) -> Result<AsummabilityWitness> {
    match tag {
        ConstructionTag::Gs | ConstructionTag::Guinf => map_points(w, append_one, append_one),
        ConstructionTag::Gmc => map_points(w, with_complement, with_complement),
        ConstructionTag::Gsm => step_up(&step_up(w, ConstructionTag::Gs)?, ConstructionTag::Gmc),
        ConstructionTag::GmcUinf => {
            step_up(&step_up(w, ConstructionTag::Gmc)?, ConstructionTag::Guinf)
        }
        ConstructionTag::GmcWinf => {
            // False points of g^d are complements of true points of g and
            // vice versa; complementing preserves equal sums.
            let u = step_up(w, ConstructionTag::GmcUinf)?;
            AsummabilityWitness::new(
                u.ell(),
                u.true_points().iter().map(Point::complement).collect(),
                u.false_points().iter().map(Point::complement).collect(),
            )
        }
    }
}

/// Carries a `B_ℓ` violation of `f` to one of `tag.apply(f)`; both ends are
/// validated.
pub fn transport_witness_up(
    w: &AsummabilityWitness,
    f: &BoolFn,
    tag: ConstructionTag,
) -> Result<AsummabilityWitness> {
    transport_witness_up_to(w, f, &tag.apply(f)?, tag)
}

/// [`transport_witness_up`] against an already built `g = tag.apply(f)`.
pub fn transport_witness_up_to(
    w: &AsummabilityWitness,
    f: &BoolFn,
    g: &BoolFn,
    tag: ConstructionTag,
) -> Result<AsummabilityWitness> {
    w.validate(f)?;
    Error::check_dim(tag.target_arity(f.arity()), g.arity())?;
    let up = step_up(w, tag)?;
    up.validate(g)?;
    Ok(up)
}

/// Checks that `m` is a `B_ℓ` violation for `f`, for any `ℓ ≥ 2`.
pub fn validate_b_violation(m: &ViolationMatrix, f: &BoolFn, ell: usize) -> Result<()> {
    Error::check_dim(2 * ell, m.height())?;
    Error::check_dim(f.arity(), m.width())?;
    for (i, row) in m.rows().iter().enumerate() {
        if f.eval(row)? != m.z().get(i) {
            return Err(Error::validation(format!("z disagrees with f at row {i}")));
        }
    }
    AsummabilityWitness::from_violation_matrix(m)?.validate(f)
}

/// Rows of a violation of `g_s(f)` rearranged so that `z = 0^ℓ 1^ℓ` and the
/// last column reads `0^α 1^β 0^α 1^β`. Returns the rows and `α`.
fn normalize_gs_violation(m: &ViolationMatrix, ell: usize) -> (Vec<Point>, usize) {
    let mut rows = m.rows().to_vec();
    if m.z().get(0) {
        rows.rotate_left(ell);
    }
    let last = m.width() - 1;
    let (lo, hi) = rows.split_at_mut(ell);
    lo.sort_by_key(|r| r.get(last));
    hi.sort_by_key(|r| r.get(last));
    let alpha = lo.iter().filter(|r| !r.get(last)).count();
    (rows, alpha)
}

/// Turns a `B_ℓ` violation of `g_s(f)` into one of `f`: drop the last
/// column, negate rows `1..α` and `ℓ+1..ℓ+α`, and swap those two blocks.
pub fn transport_witness_down_gs(
    m: &ViolationMatrix,
    f: &BoolFn,
    ell: usize,
) -> Result<ViolationMatrix> {
    let g = g_s(f)?;
    validate_b_violation(m, &g, ell)?;
    let (rows, alpha) = normalize_gs_violation(m, ell);
    let n = f.arity();
    let drop_last = |r: &Point| Point::new(r.bits()[..n].to_vec());
    let mut k: Vec<Point> = rows.iter().map(drop_last).collect();
    for i in 0..alpha {
        let top = drop_last(&rows[ell + i]).complement();
        let bottom = drop_last(&rows[i]).complement();
        k[i] = top;
        k[ell + i] = bottom;
    }
    let out = ViolationMatrix::from_rows(f, k)?;
    validate_b_violation(&out, f, ell)?;
    Ok(out)
}
