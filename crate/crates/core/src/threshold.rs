// SPDX-License-Identifier: Apache-2.0

//! Exact threshold decision.
//!
//! `f` is threshold iff the convex hulls of its true and false points are
//! disjoint. The solver looks for a point in both hulls,
//!
//! ```text
//! Σ λ_b b = Σ μ_a a,   Σ λ_b = 1,   Σ μ_a = 1,   λ, μ ≥ 0,
//! ```
//!
//! with a phase-one revised simplex over exact rationals (Bland's rule).
//! When the system is infeasible, the optimal dual `(u, α, β)` satisfies
//! `-u·b ≥ α` on true points and `-u·a ≤ -β < α` on false points, which is a
//! separating certificate. When it is feasible, the hull point is a rational
//! combination; clearing denominators turns it into an equal-sum multiset
//! witness. Either way the answer carries an independently checkable proof.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::asummability::AsummabilityWitness;
use crate::boolfn::{all_functions, bit, BoolFn, Point};
use crate::clones::{is_member, CloneId};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest arity handed to the LP (`2^20` columns).
pub const MAX_LP_ARITY: usize = 20;

/// Largest multiset size reported as a hull witness.
pub const MAX_HULL_WITNESS_ELL: usize = 1024;

/// An exact rational serialized as `"p/q"` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn integer(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in `{s}`")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::parse(s.find('/').map_or(0, |i| i + 1), "bad denominator"))?;
        if q.is_zero() {
            return Err(Error::parse(s.find('/').map_or(0, |i| i + 1), "zero denominator"));
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Weights and threshold: `w·b ≥ t` on true points, `w·a < t` on false points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCertificate {
    pub weights: Vec<Rational>,
    #[serde(rename = "t")]
    pub threshold: Rational,
}

impl ThresholdCertificate {
    pub fn from_integers(weights: &[i64], threshold: i64) -> Self {
        ThresholdCertificate {
            weights: weights.iter().map(|&w| Rational::integer(w)).collect(),
            threshold: Rational::integer(threshold),
        }
    }

    /// Integer weights and threshold, when every entry is integral.
    pub fn as_integers(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let int = |r: &Rational| r.0.is_integer().then(|| r.0.to_integer());
        let w = self.weights.iter().map(int).collect::<Option<Vec<_>>>()?;
        Some((w, int(&self.threshold)?))
    }
}

/// Checks every point of `B^n` against the certificate.
pub fn verify_certificate(f: &BoolFn, cert: &ThresholdCertificate) -> Result<bool> {
    Error::check_dim(f.arity(), cert.weights.len())?;
    let n = f.arity();
    // Common denominator so that every comparison is on integers.
    let den = cert
        .weights
        .iter()
        .chain([&cert.threshold])
        .fold(BigInt::one(), |acc, r| acc.lcm(r.0.denom()));
    let scale = |r: &Rational| (&r.0 * BigRational::from_integer(den.clone())).to_integer();
    let w: Vec<BigInt> = cert.weights.iter().map(scale).collect();
    let t = scale(&cert.threshold);
    Ok(Exec::default().all(0..f.size(), |idx| {
        let dot: BigInt = (0..n)
            .filter(|&i| bit(idx, n, i))
            .fold(BigInt::zero(), |acc, i| acc + &w[i]);
        (dot >= t) == f.value(idx)
    }))
}

/// Outcome of the exact LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Threshold(ThresholdCertificate),
    /// The hulls meet. The witness is present when the common point's
    /// denominator is at most [`MAX_HULL_WITNESS_ELL`].
    NotThreshold(Option<AsummabilityWitness>),
}

/// Certificate if `f` is threshold, `None` otherwise.
pub fn is_threshold(f: &BoolFn) -> Result<Option<ThresholdCertificate>> {
    Ok(match separation(f)? {
        Separation::Threshold(c) => Some(c),
        Separation::NotThreshold(_) => None,
    })
}

pub fn separation(f: &BoolFn) -> Result<Separation> {
    Error::check_budget("threshold LP arity", f.arity() as u128, MAX_LP_ARITY as u128)?;
    let n = f.arity();
    let ones = f.count_ones();
    if ones == 0 {
        return Ok(Separation::Threshold(ThresholdCertificate::from_integers(
            &vec![0; n],
            1,
        )));
    }
    if ones == f.size() {
        return Ok(Separation::Threshold(ThresholdCertificate::from_integers(
            &vec![0; n],
            0,
        )));
    }
    let mut lp = HullLp::new(f);
    lp.solve();
    if lp.objective().is_positive() {
        let cert = lp.certificate();
        if !verify_certificate(f, &cert)? {
            return Err(Error::Consistency(format!(
                "LP dual for {f} does not separate"
            )));
        }
        Ok(Separation::Threshold(cert))
    } else {
        let w = lp.hull_witness()?;
        if let Some(w) = &w {
            w.validate(f)?;
        }
        Ok(Separation::NotThreshold(w))
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Phase-one revised simplex for the hull-intersection system.
///
/// Rows `0..n` are the coordinates, row `n` is `Σ λ = 1`, row `n + 1` is
/// `Σ μ = 1`. Column `j < 2^n` is the point with index `j`: `(b, 1, 0)` for a
/// true point, `(-a, 0, 1)` for a false one. Columns `2^n + r` are the
/// artificial slacks; they start basic and never re-enter.
struct HullLp<'a> {
    f: &'a BoolFn,
    n: usize,
    m: usize,
    basis: Vec<usize>,
    binv: Vec<Vec<BigRational>>,
    xb: Vec<BigRational>,
}

impl<'a> HullLp<'a> {
    fn new(f: &'a BoolFn) -> Self {
        let n = f.arity();
        let m = n + 2;
        let size = f.size();
        let binv = (0..m)
            .map(|r| (0..m).map(|c| if r == c { q(1) } else { q(0) }).collect())
            .collect();
        let xb = (0..m).map(|r| if r >= n { q(1) } else { q(0) }).collect();
        HullLp {
            f,
            n,
            m,
            basis: (size..size + m).collect(),
            binv,
            xb,
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.f.size()
    }

    fn column(&self, j: usize) -> Vec<i64> {
        let n = self.n;
        let truth = self.f.value(j);
        let sign = if truth { 1 } else { -1 };
        let mut a: Vec<i64> = (0..n).map(|i| if bit(j, n, i) { sign } else { 0 }).collect();
        a.push(truth as i64);
        a.push(!truth as i64);
        a
    }

    fn objective(&self) -> BigRational {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(&col, _)| self.is_artificial(col))
            .fold(q(0), |acc, (_, x)| acc + x)
    }

    /// `y = c_B B⁻¹`.
    fn duals(&self) -> Vec<BigRational> {
        (0..self.m)
            .map(|k| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(_, &col)| self.is_artificial(col))
                    .fold(q(0), |acc, (r, _)| acc + &self.binv[r][k])
            })
            .collect()
    }

    /// First column with `y·A_j > 0` (negative reduced cost).
    fn entering(&self, y: &[BigRational]) -> Option<usize> {
        let den = y.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let yi: Vec<BigInt> = y
            .iter()
            .map(|r| (r * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let n = self.n;
        let (tr, fa) = (n, n + 1);
        if let Some(small) = yi.iter().map(|v| v.to_i64()).collect::<Option<Vec<i64>>>() {
            let small: Vec<i128> = small.into_iter().map(i128::from).collect();
            (0..self.f.size()).find(|&j| {
                let coords: i128 = (0..n).filter(|&i| bit(j, n, i)).map(|i| small[i]).sum();
                let dot = if self.f.value(j) {
                    coords + small[tr]
                } else {
                    small[fa] - coords
                };
                dot > 0
            })
        } else {
            (0..self.f.size()).find(|&j| {
                let coords: BigInt = (0..n)
                    .filter(|&i| bit(j, n, i))
                    .fold(BigInt::zero(), |acc, i| acc + &yi[i]);
                let dot = if self.f.value(j) {
                    coords + &yi[tr]
                } else {
                    &yi[fa] - coords
                };
                dot.is_positive()
            })
        }
    }

    fn solve(&mut self) {
        loop {
            let y = self.duals();
            let Some(j) = self.entering(&y) else {
                return;
            };
            let a = self.column(j);
            let u: Vec<BigRational> = self
                .binv
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&a)
                        .filter(|(_, &v)| v != 0)
                        .fold(q(0), |acc, (b, &v)| acc + b * q(v))
                })
                .collect();
            // Ratio test; ties go to the smallest basic column index.
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.m {
                if !u[r].is_positive() {
                    continue;
                }
                let ratio = &self.xb[r] / &u[r];
                let better = match &best {
                    None => true,
                    Some((p, b)) => ratio < *b || (ratio == *b && self.basis[r] < self.basis[*p]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let (p, _) = best.expect("phase one is bounded below");
            self.pivot(p, j, &u);
        }
    }

    fn pivot(&mut self, p: usize, j: usize, u: &[BigRational]) {
        let piv = u[p].clone();
        for v in self.binv[p].iter_mut() {
            *v /= &piv;
        }
        self.xb[p] /= &piv;
        let prow = self.binv[p].clone();
        let px = self.xb[p].clone();
        for r in 0..self.m {
            if r == p || u[r].is_zero() {
                continue;
            }
            for (v, pv) in self.binv[r].iter_mut().zip(&prow) {
                *v -= &u[r] * pv;
            }
            self.xb[r] -= &u[r] * &px;
        }
        self.basis[p] = j;
    }

    /// Integer certificate from the optimal duals, with `t` lowered to the
    /// smallest true-point value.
    fn certificate(&self) -> ThresholdCertificate {
        let y = self.duals();
        let n = self.n;
        let den = y[..n].iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut w: Vec<BigInt> = y[..n]
            .iter()
            .map(|r| -(r * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = w.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if !g.is_zero() {
            for v in w.iter_mut() {
                *v /= &g;
            }
        }
        let t = self
            .f
            .true_indices()
            .into_iter()
            .map(|idx| {
                (0..n)
                    .filter(|&i| bit(idx, n, i))
                    .fold(BigInt::zero(), |acc, i| acc + &w[i])
            })
            .min()
            .expect("non-constant functions have true points");
        ThresholdCertificate {
            weights: w
                .into_iter()
                .map(|v| Rational(BigRational::from_integer(v)))
                .collect(),
            threshold: Rational(BigRational::from_integer(t)),
        }
    }

    /// Clears denominators of the basic `λ`, `μ` into multiplicities.
    fn hull_witness(&self) -> Result<Option<AsummabilityWitness>> {
        let den = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(&col, _)| !self.is_artificial(col))
            .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
        let Some(ell) = den.to_usize().filter(|&d| d <= MAX_HULL_WITNESS_ELL) else {
            return Ok(None);
        };
        let mut basic: Vec<(usize, usize)> = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(&col, x)| !self.is_artificial(col) && x.is_positive())
            .map(|(&col, x)| {
                let mult = (x * BigRational::from_integer(den.clone()))
                    .to_integer()
                    .to_usize()
                    .expect("bounded by the denominator");
                (col, mult)
            })
            .collect();
        basic.sort_unstable();
        let expand = |truth: bool| -> Vec<Point> {
            basic
                .iter()
                .filter(|(col, _)| self.f.value(*col) == truth)
                .flat_map(|&(col, k)| std::iter::repeat_n(Point::from_index(col, self.n), k))
                .collect()
        };
        if ell < 2 {
            return Err(Error::Consistency("hull point with denominator 1".into()));
        }
        AsummabilityWitness::new(ell, expand(false), expand(true)).map(Some)
    }
}

/// Thresholdness of every identification minor, in pair order.
pub fn identification_minor_certificates(
    f: &BoolFn,
) -> Result<Vec<((usize, usize), Option<ThresholdCertificate>)>> {
    let minors = f.identification_minors()?;
    Exec::default()
        .map_slice(&minors, |(pair, g)| is_threshold(g).map(|c| (*pair, c)))
        .into_iter()
        .collect()
}

/// Not threshold, while every identification minor is.
pub fn is_minimally_non_threshold(f: &BoolFn) -> Result<bool> {
    if is_threshold(f)?.is_some() {
        return Ok(false);
    }
    Ok(identification_minor_certificates(f)?
        .iter()
        .all(|(_, c)| c.is_some()))
}

/// `f ∈ C ∩ thr`.
pub fn intersection_membership(f: &BoolFn, c: CloneId) -> Result<bool> {
    Ok(is_member(f, c) && is_threshold(f)?.is_some())
}

/// `L ∩ thr = Ω(1)` evaluated at `f`: both sides agree on `f`.
pub fn linear_threshold_identity(f: &BoolFn) -> Result<bool> {
    Ok(intersection_membership(f, CloneId::L)? == is_member(f, CloneId::Omega1))
}

/// Why `C ∩ thr` is or is not finitely characterizable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassificationReason {
    #[serde(rename = "subclone-of-L-V-Lambda")]
    SubcloneOfLVLambda,
    #[serde(rename = "contains-SM")]
    ContainsSM,
    #[serde(rename = "contains-McUinf")]
    ContainsMcUinf,
    #[serde(rename = "contains-McWinf")]
    ContainsMcWinf,
}

impl fmt::Display for ClassificationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassificationReason::SubcloneOfLVLambda => "subclone-of-L-V-Lambda",
            ClassificationReason::ContainsSM => "contains-SM",
            ClassificationReason::ContainsMcUinf => "contains-McUinf",
            ClassificationReason::ContainsMcWinf => "contains-McWinf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub clone: CloneId,
    pub finitely_characterizable: bool,
    pub reason: ClassificationReason,
}

/// The clone among `L`, `V`, `Λ` containing `c`, or the clone among `SM`,
/// `McU∞`, `McW∞` contained in `c`. Read off Post's lattice.
pub fn lattice_anchor(c: CloneId) -> CloneId {
    use CloneId::*;
    match c {
        L | L0 | L1 | LS | Lc | Omega1 | IStar | I | I0 | I1 | Ic => L,
        Lambda | Lambda0 | Lambda1 | Lambdac => Lambda,
        V | V0 | V1 | Vc => V,
        Omega | T0 | T1 | Tc | M | M0 | M1 | Mc | S | Sc | SM => SM,
        U(_) | TcU(_) | MU(_) | McU(_) => McU(crate::clones::Rank::Infinite),
        W(_) | TcW(_) | MW(_) | McW(_) => McW(crate::clones::Rank::Infinite),
    }
}

pub fn classify_intersection(c: CloneId) -> ClassificationVerdict {
    use crate::clones::Rank::Infinite;
    let reason = match lattice_anchor(c) {
        CloneId::L | CloneId::Lambda | CloneId::V => ClassificationReason::SubcloneOfLVLambda,
        CloneId::SM => ClassificationReason::ContainsSM,
        CloneId::McU(Infinite) => ClassificationReason::ContainsMcUinf,
        _ => ClassificationReason::ContainsMcWinf,
    };
    ClassificationVerdict {
        clone: c,
        finitely_characterizable: reason == ClassificationReason::SubcloneOfLVLambda,
        reason,
    }
}

/// Re-derives each catalogue row from membership over all functions of arity
/// `1..=max_arity`: a finitely characterizable `C` has all members inside its
/// anchor; otherwise the anchor's members all lie in `C`, and `C` has a
/// member outside each of `L`, `V`, `Λ`.
pub fn check_classification_table(catalogue: &[CloneId], max_arity: usize) -> Result<()> {
    let funcs: Vec<BoolFn> = (1..=max_arity)
        .map(all_functions)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for &c in catalogue {
        let v = classify_intersection(c);
        let anchor = lattice_anchor(c);
        if v.finitely_characterizable {
            if let Some(f) = funcs.iter().find(|f| is_member(f, c) && !is_member(f, anchor)) {
                return Err(Error::Consistency(format!("{f} in {c} but not in {anchor}")));
            }
        } else {
            if let Some(f) = funcs.iter().find(|f| is_member(f, anchor) && !is_member(f, c)) {
                return Err(Error::Consistency(format!("{f} in {anchor} but not in {c}")));
            }
            for big in [CloneId::L, CloneId::V, CloneId::Lambda] {
                if !funcs.iter().any(|f| is_member(f, c) && !is_member(f, big)) {
                    return Err(Error::Consistency(format!(
                        "{c} looks contained in {big} up to arity {max_arity}"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::named::*;
    use crate::clones::Rank;

    #[test]
    fn spec_examples() {
        let and = is_threshold(&and2()).unwrap().unwrap();
        assert!(verify_certificate(&and2(), &and).unwrap());
        assert!(verify_certificate(&and2(), &ThresholdCertificate::from_integers(&[1, 1], 2)).unwrap());
        assert!(!verify_certificate(&and2(), &ThresholdCertificate::from_integers(&[1, 1], 1)).unwrap());
        assert!(is_threshold(&xor2()).unwrap().is_none());
        let m = is_threshold(&maj3()).unwrap().unwrap();
        assert!(verify_certificate(&maj3(), &m).unwrap());
        assert!(verify_certificate(&maj3(), &ThresholdCertificate::from_integers(&[1, 1, 1], 2)).unwrap());
        assert!(verify_certificate(&and2(), &ThresholdCertificate::from_integers(&[1], 2)).is_err());
    }

    #[test]
    fn xor_hull_witness() {
        match separation(&xor2()).unwrap() {
            Separation::NotThreshold(Some(w)) => {
                assert_eq!(w.ell(), 2);
                w.validate(&xor2()).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimal_non_threshold_examples() {
        assert!(is_minimally_non_threshold(&xor2()).unwrap());
        assert!(is_minimally_non_threshold(&xnor2()).unwrap());
        assert!(!is_minimally_non_threshold(&and2()).unwrap());
        // x1 x2 ∨ x3 x4 is not threshold, and identifying x1 with x3 gives
        // x1 (x2 ∨ x4), which is.
        let f = BoolFn::from_fn(4, |i| i & 0b1100 == 0b1100 || i & 0b11 == 0b11).unwrap();
        assert!(is_threshold(&f).unwrap().is_none());
    }

    #[test]
    fn constants_and_projections() {
        for v in [false, true] {
            let c = BoolFn::constant(3, v).unwrap();
            let cert = is_threshold(&c).unwrap().unwrap();
            assert!(verify_certificate(&c, &cert).unwrap());
        }
        let p = BoolFn::projection(3, 1).unwrap();
        let cert = is_threshold(&p).unwrap().unwrap();
        assert!(verify_certificate(&p, &cert).unwrap());
        assert!(cert.as_integers().is_some());
    }

    #[test]
    fn rational_text() {
        let r: Rational = "6/-4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::integer(2).to_string(), "2/1");
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::integer(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
        let cert = ThresholdCertificate::from_integers(&[1, 1], 2);
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            r#"{"weights":["1/1","1/1"],"t":"2/1"}"#
        );
    }

    #[test]
    fn arity_budget() {
        let f = BoolFn::constant(21, false).unwrap();
        assert!(matches!(is_threshold(&f), Err(Error::Resource { .. })));
    }

    #[test]
    fn classification_examples() {
        let v = classify_intersection(CloneId::Lambdac);
        assert!(v.finitely_characterizable);
        assert_eq!(v.reason, ClassificationReason::SubcloneOfLVLambda);
        let v = classify_intersection(CloneId::SM);
        assert!(!v.finitely_characterizable);
        assert_eq!(v.reason, ClassificationReason::ContainsSM);
        assert!(!classify_intersection(CloneId::Omega).finitely_characterizable);
        assert_eq!(
            classify_intersection(CloneId::TcW(Rank::Finite(3))).reason,
            ClassificationReason::ContainsMcWinf
        );
        let json = serde_json::to_string(&classify_intersection(CloneId::U(Rank::Infinite))).unwrap();
        assert_eq!(
            json,
            r#"{"clone":"Uinf","finitely_characterizable":false,"reason":"contains-McUinf"}"#
        );
    }

    #[test]
    fn intersection_examples() {
        assert!(intersection_membership(&maj3(), CloneId::SM).unwrap());
        assert!(intersection_membership(&and2(), CloneId::Lambda).unwrap());
        assert!(!intersection_membership(&xor2(), CloneId::L).unwrap());
        assert!(linear_threshold_identity(&xor2()).unwrap());
        assert!(linear_threshold_identity(&not()).unwrap());
    }
}
