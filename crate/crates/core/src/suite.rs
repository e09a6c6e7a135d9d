// SPDX-License-Identifier: Apache-2.0

//! Batch verification suites. Each check re-derives a published claim at
//! desk scale and records its witness; record order is fixed by the suite.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::asummability::{equal_sums_witness, is_k_asummable, preserves_b_fast};
use crate::boolfn::{all_functions, named, BoolFn};
use crate::clones::{is_member, is_monotone, membership_crosscheck, CloneId, DEFAULT_RANK_BOUND};
use crate::constraints::{make_b, minimal_forbidden_minors, preserves};
use crate::constructions::{transport_witness_up_to, ConstructionTag};
use crate::error::{Error, Result};
use crate::report::{Budgets, CheckRecord, Verdict, VerificationReport};
use crate::threshold::{
    check_classification_table, classify_intersection, identification_minor_certificates,
    is_threshold, linear_threshold_identity, separation, verify_certificate, Separation,
};
use crate::tz::{build_tz, periodic_witness, tz_preserves_b, verify_dot_classification, verify_row_col_lemma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    PaperCore,
    Constructions,
    Tz,
    Classification,
    All,
}

impl SuiteName {
    pub const PARTS: [SuiteName; 4] = [
        SuiteName::PaperCore,
        SuiteName::Constructions,
        SuiteName::Tz,
        SuiteName::Classification,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteName::PaperCore => "paper-core",
            SuiteName::Constructions => "constructions",
            SuiteName::Tz => "tz",
            SuiteName::Classification => "classification",
            SuiteName::All => "all",
        })
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-core" => Ok(SuiteName::PaperCore),
            "constructions" => Ok(SuiteName::Constructions),
            "tz" => Ok(SuiteName::Tz),
            "classification" => Ok(SuiteName::Classification),
            "all" => Ok(SuiteName::All),
            _ => Err(Error::parse(0, format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    pub budgets: Budgets,
    pub seed: u64,
    /// Record wall-clock times (makes reports differ between runs).
    pub timings: bool,
}

type Outcome = Result<(bool, Value)>;

struct Runner {
    opts: SuiteOptions,
    records: Vec<CheckRecord>,
}

impl Runner {
    fn check(&mut self, claim: &str, anchor: &str, body: impl FnOnce(&SuiteOptions) -> Outcome) {
        let start = Instant::now();
        let (verdict, witness) = match body(&self.opts) {
            Ok((true, w)) => (Verdict::Pass, w),
            Ok((false, w)) => (Verdict::Fail, w),
            Err(e @ Error::Resource { .. }) => (Verdict::Skipped, json!({ "error": e.to_string() })),
            Err(e) => (Verdict::Fail, json!({ "error": e.to_string() })),
        };
        self.records.push(CheckRecord {
            claim: claim.to_string(),
            anchor: anchor.to_string(),
            verdict,
            witness,
            elapsed_ms: self.opts.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }
}

pub fn run_suite(name: SuiteName, opts: SuiteOptions) -> VerificationReport {
    let mut r = Runner {
        opts,
        records: Vec::new(),
    };
    let parts: Vec<SuiteName> = match name {
        SuiteName::All => SuiteName::PARTS.to_vec(),
        other => vec![other],
    };
    for part in parts {
        match part {
            SuiteName::PaperCore => paper_core(&mut r),
            SuiteName::Constructions => constructions(&mut r),
            SuiteName::Tz => tz(&mut r),
            SuiteName::Classification => classification(&mut r),
            SuiteName::All => unreachable!("expanded above"),
        }
    }
    VerificationReport::new(&name.to_string(), opts.seed, opts.budgets, r.records)
}

fn functions_up_to(max_arity: usize) -> Result<Vec<BoolFn>> {
    Ok((1..=max_arity)
        .map(all_functions)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect())
}

fn f3() -> Result<BoolFn> {
    Ok(build_tz(3, None)?.function()?.clone())
}

/// All `(w, t)` with `w ∈ [-8, 8]^3`, `t ∈ [-24, 25]`, as realized tables.
pub fn integer_threshold_tables() -> BTreeSet<BoolFn> {
    let mut out = BTreeSet::new();
    for w0 in -8i64..=8 {
        for w1 in -8i64..=8 {
            for w2 in -8i64..=8 {
                for t in -24i64..=25 {
                    let f = BoolFn::from_fn(3, |idx| {
                        let dot = w0 * (idx >> 2 & 1) as i64
                            + w1 * (idx >> 1 & 1) as i64
                            + w2 * (idx & 1) as i64;
                        dot >= t
                    })
                    .expect("arity 3");
                    out.insert(f);
                }
            }
        }
    }
    out
}

fn paper_core(r: &mut Runner) {
    r.check(
        "xor-parity",
        "XOR preserves B_l exactly when l is odd (l = 2..7)",
        |o| {
            let mut ok = true;
            let mut rows = Vec::new();
            for ell in 2..=7 {
                let w = equal_sums_witness(&named::xor2(), ell, o.budgets.multisets)?;
                ok &= w.is_none() == (ell % 2 == 1);
                rows.push(json!({ "ell": ell, "preserves": w.is_none(), "witness": w }));
            }
            Ok((ok, Value::Array(rows)))
        },
    );
    r.check(
        "pol-b-equivalence",
        "f preserves B_l iff no l false points and l true points have equal sums (arity <= 3, l = 2, 3)",
        |o| {
            let fs = functions_up_to(3)?;
            let mut mismatches = Vec::new();
            for ell in [2, 3] {
                let q = make_b(ell)?;
                for f in &fs {
                    let fast = preserves_b_fast(f, ell, o.budgets.multisets)?;
                    let raw = preserves(f, &q, o.budgets.columns)?;
                    if fast != raw {
                        mismatches.push(json!({ "fn": f, "ell": ell, "fast": fast, "raw": raw }));
                    }
                }
            }
            Ok((
                mismatches.is_empty(),
                json!({ "functions": fs.len(), "ells": [2, 3], "mismatches": mismatches }),
            ))
        },
    );
    r.check("f3-monotone", "f_3 is monotone", |_| {
        let f = f3()?;
        Ok((is_monotone(&f), json!({ "fn": f, "points": f.size() })))
    });
    r.check("f3-not-threshold", "f_3 is not a threshold function", |_| {
        let f = f3()?;
        match separation(&f)? {
            Separation::Threshold(c) => Ok((false, json!({ "certificate": c }))),
            Separation::NotThreshold(w) => Ok((true, json!({ "hull_witness": w }))),
        }
    });
    r.check(
        "f3-minimally-non-threshold",
        "every identification minor of f_3 is threshold",
        |_| {
            let certs = identification_minor_certificates(&f3()?)?;
            let all = certs.iter().all(|(_, c)| c.is_some());
            let minors: Vec<Value> = certs
                .iter()
                .map(|((i, j), c)| json!({ "pair": [i, j], "certificate": c }))
                .collect();
            Ok((all && certs.len() == 36, json!({ "count": certs.len(), "minors": minors })))
        },
    );
    r.check(
        "threshold-oracle",
        "exact LP agrees with integer weight search over [-8,8]^3 x [-24,25] on all arity-3 functions",
        |_| {
            let oracle = integer_threshold_tables();
            let mut mismatches = Vec::new();
            let mut thr = 0;
            for f in all_functions(3)? {
                let lp = is_threshold(&f)?;
                if let Some(c) = &lp {
                    thr += 1;
                    if !verify_certificate(&f, c)? {
                        mismatches.push(json!({ "fn": f, "reason": "certificate rejected" }));
                    }
                }
                if lp.is_some() != oracle.contains(&f) {
                    mismatches.push(json!({ "fn": f, "lp": lp.is_some() }));
                }
            }
            Ok((
                mismatches.is_empty(),
                json!({ "functions": 256, "threshold": thr, "mismatches": mismatches }),
            ))
        },
    );
    r.check(
        "forbidden-minors-b2",
        "the minimal forbidden minors of Pol B_2 up to arity 2 are XOR and XNOR",
        |o| {
            let budget = o.budgets.multisets;
            let found = minimal_forbidden_minors(|f| preserves_b_fast(f, 2, budget), 2)?;
            let expected: BTreeSet<BoolFn> =
                [named::xor2(), named::xnor2()].iter().map(BoolFn::canonical_form).collect();
            Ok((found == expected, json!({ "minors": found })))
        },
    );
    r.check(
        "random-threshold-sweep",
        "threshold certificates verify, thresholdness is dual-invariant, and threshold implies 4-asummable (random arity-4 functions)",
        |o| {
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
            let mut bad = Vec::new();
            let mut thr = 0;
            for _ in 0..64 {
                let table: u16 = rng.gen();
                let f = BoolFn::from_fn(4, |idx| table >> idx & 1 == 1)?;
                let c = is_threshold(&f)?;
                let d = is_threshold(&f.dual())?;
                let ok = c.is_some() == d.is_some()
                    && match &c {
                        Some(c) => verify_certificate(&f, c)? && is_k_asummable(&f, 4, o.budgets.multisets)?,
                        None => true,
                    };
                thr += c.is_some() as usize;
                if !ok {
                    bad.push(f);
                }
            }
            Ok((bad.is_empty(), json!({ "samples": 64, "threshold": thr, "failures": bad })))
        },
    );
}

fn constructions(r: &mut Runner) {
    r.check(
        "construction-equivalence",
        "g_s, g_mc, g_uinf keep every B_l verdict and land in their clones (arity <= 2, l = 2, 3)",
        |o| {
            let single = [ConstructionTag::Gs, ConstructionTag::Gmc, ConstructionTag::Guinf];
            let mut failures = Vec::new();
            let fs = functions_up_to(2)?;
            for f in &fs {
                for tag in ConstructionTag::ALL {
                    let g = tag.apply(f)?;
                    if !is_member(&g, tag.target()) {
                        failures.push(json!({ "fn": f, "tag": tag, "reason": "membership" }));
                    }
                    if !single.contains(&tag) {
                        continue;
                    }
                    for ell in [2, 3] {
                        let a = preserves_b_fast(f, ell, o.budgets.multisets)?;
                        let b = preserves_b_fast(&g, ell, o.budgets.multisets)?;
                        if a != b {
                            failures.push(json!({ "fn": f, "tag": tag, "ell": ell }));
                        }
                    }
                }
            }
            Ok((failures.is_empty(), json!({ "functions": fs.len(), "failures": failures })))
        },
    );
    r.check(
        "gsm-xor",
        "g_sm(XOR) is self-dual monotone, fails B_2 by a transported witness and preserves B_3",
        |o| {
            let f = named::xor2();
            let g = ConstructionTag::Gsm.apply(&f)?;
            let w = equal_sums_witness(&f, 2, o.budgets.multisets)?
                .ok_or_else(|| Error::Consistency("XOR preserves B_2".into()))?;
            let up = transport_witness_up_to(&w, &f, &g, ConstructionTag::Gsm)?;
            let member = is_member(&g, CloneId::SM);
            let b3 = preserves_b_fast(&g, 3, o.budgets.multisets)?;
            Ok((
                member && b3,
                json!({ "fn": g, "member_SM": member, "b2_witness": up, "preserves_b3": b3 }),
            ))
        },
    );
    for tag in [ConstructionTag::Gsm, ConstructionTag::GmcUinf, ConstructionTag::GmcWinf] {
        let target = tag.target();
        r.check(
            &format!("chain-{target}"),
            &format!("{tag}(f_3) lies in {target} and fails B_3 by a transported witness"),
            |o| {
                let f = f3()?;
                let w = equal_sums_witness(&f, 3, o.budgets.multisets)?
                    .ok_or_else(|| Error::Consistency("f_3 preserves B_3".into()))?;
                let g = tag.apply(&f)?;
                let member = is_member(&g, target);
                let up = transport_witness_up_to(&w, &f, &g, tag)?;
                Ok((
                    member,
                    json!({ "arity": g.arity(), "member": member, "b3_witness": up }),
                ))
            },
        );
    }
}

fn tz(r: &mut Runner) {
    r.check(
        "row-col-lemma",
        "sum of A^{p,q} over S equals the all-(k-1) matrix iff S is a row or a column (k = 3)",
        |_| {
            let c = verify_row_col_lemma(3)?;
            Ok((c.holds && c.qualifying.len() == 6, json!(&c)))
        },
    );
    r.check(
        "dot-classification",
        "x.w = t iff x is a row or a column (k = 3)",
        |_| {
            let inst = build_tz(3, None)?;
            Ok((verify_dot_classification(&inst)?, json!({ "points": 512 })))
        },
    );
    for (k, ell, expected) in [(3, 2, true), (3, 3, false), (3, 6, false), (4, 2, true), (4, 3, true), (4, 4, false)] {
        r.check(
            &format!("f{k}-b{ell}"),
            &format!(
                "f_{k} {} B_{ell}",
                if expected { "preserves" } else { "does not preserve" }
            ),
            |o| {
                let inst = build_tz(k, None)?;
                let v = if k == 3 && ell == 3 {
                    // Exercise the unrestricted search on the small instance.
                    let w = equal_sums_witness(inst.function()?, ell, o.budgets.multisets)?;
                    json!({ "ell": ell, "preserves": w.is_none(), "method": "multiset", "witness": w })
                } else {
                    json!(tz_preserves_b(&inst, ell, o.budgets.multisets)?)
                };
                Ok((v["preserves"] == json!(expected), v))
            },
        );
    }
    r.check(
        "tz-antichain",
        "f_3 and f_4 are incomparable under the minor relation",
        |o| {
            let i3 = build_tz(3, None)?;
            let i4 = build_tz(4, None)?;
            let (f3, f4) = (i3.function()?, i4.function()?);
            let all_essential = f3.essential_variables().len() == 9 && f4.essential_variables().len() == 16;
            let f3_b3 = equal_sums_witness(f3, 3, o.budgets.multisets)?.is_none();
            let f4_b3 = tz_preserves_b(&i4, 3, o.budgets.multisets)?.preserves;
            Ok((
                all_essential && !f3_b3 && f4_b3,
                json!({
                    "all_variables_essential": all_essential,
                    "f3_preserves_b3": f3_b3,
                    "f4_preserves_b3": f4_b3,
                }),
            ))
        },
    );
    r.check("f3-periodic-b3", "m copies of each column against m copies of each row (k = 3, l = 3)", |_| {
        let inst = build_tz(3, None)?;
        let w = periodic_witness(&inst, 3)?;
        Ok((w.sum() == vec![1; 9], json!(&w)))
    });
}

fn classification(r: &mut Runner) {
    r.check(
        "classification-table",
        "C ∩ thr is finitely characterizable iff C is contained in L, V or Λ",
        |_| {
            let cat = CloneId::catalogue(DEFAULT_RANK_BOUND);
            check_classification_table(&cat, 3)?;
            let rows: Vec<Value> = cat.iter().map(|&c| json!(classify_intersection(c))).collect();
            let fc = cat
                .iter()
                .filter(|&&c| classify_intersection(c).finitely_characterizable)
                .count();
            Ok((true, json!({ "clones": cat.len(), "finitely_characterizable": fc, "table": rows })))
        },
    );
    r.check("l-cap-thr", "L ∩ thr = Ω(1) on all functions of arity <= 3", |_| {
        let bad: Vec<BoolFn> = functions_up_to(3)?
            .into_iter()
            .filter(|f| !linear_threshold_identity(f).unwrap_or(false))
            .collect();
        Ok((bad.is_empty(), json!({ "failures": bad })))
    });
    r.check("lambda-v-threshold", "Λ and V consist of threshold functions (arity <= 3)", |_| {
        let mut bad = Vec::new();
        for f in functions_up_to(3)? {
            if (is_member(&f, CloneId::Lambda) || is_member(&f, CloneId::V)) && is_threshold(&f)?.is_none() {
                bad.push(f);
            }
        }
        Ok((bad.is_empty(), json!({ "failures": bad })))
    });
    r.check(
        "membership-crosscheck",
        "membership by definition agrees with preservation of the characterizing relations (arity <= 3)",
        |o| {
            let fs = functions_up_to(3)?;
            let cat = CloneId::catalogue(DEFAULT_RANK_BOUND);
            let mut checked = 0usize;
            for f in &fs {
                for &c in &cat {
                    membership_crosscheck(f, c, DEFAULT_RANK_BOUND, o.budgets.columns)?;
                    checked += 1;
                }
            }
            Ok((true, json!({ "pairs": checked })))
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        for s in ["paper-core", "constructions", "tz", "classification", "all"] {
            assert_eq!(s.parse::<SuiteName>().unwrap().to_string(), s);
        }
        assert!("core".parse::<SuiteName>().is_err());
    }

    #[test]
    fn tiny_budget_skips_instead_of_passing() {
        let opts = SuiteOptions {
            budgets: Budgets {
                multisets: 10,
                columns: 10,
            },
            ..Default::default()
        };
        let r = run_suite(SuiteName::PaperCore, opts);
        assert!(!r.pass);
        let xor = &r.records[0];
        assert_eq!(xor.verdict, Verdict::Skipped);
    }
}
