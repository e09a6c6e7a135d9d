// SPDX-License-Identifier: Apache-2.0

//! `boolclone`: thresholdness, `B_ℓ` preservation, clone membership and
//! verification suites from the shell.
//!
//! Exit status: 0 when the command succeeded and every check it ran passed,
//! 1 when a check failed, 2 on bad input or an exceeded budget.

use std::io::Write;
use std::process::ExitCode;

use boolclone_core::asummability::{equal_sums_witness, is_k_asummable, preserves_b_fast};
use boolclone_core::clones::{
    characterizing_constraints, is_linear, is_member, is_monotone, is_self_dual, membership_crosscheck, CloneId,
    DEFAULT_RANK_BOUND,
};
use boolclone_core::constraints::{make_b, minimal_forbidden_minors, pol_enumerate, violation_witness, RelationalConstraint};
use boolclone_core::constructions::{transport_witness_up_to, ConstructionTag};
use boolclone_core::report::{emit_report, parse_fn, Budgets, CheckRecord, Format, Verdict, VerificationReport};
use boolclone_core::suite::{run_suite, SuiteName, SuiteOptions};
use boolclone_core::threshold::{
    check_classification_table, classify_intersection, identification_minor_certificates, separation,
    verify_certificate, Separation, ThresholdCertificate,
};
use boolclone_core::tz::{build_tz, periodic_witness, tz_preserves_b, verify_dot_classification, verify_row_col_lemma};
use boolclone_core::{BoolFn, Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "boolclone", version, about = "Threshold functions inside clones of Boolean functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest number of size-l multisets an equal-sum search may hash.
    #[arg(long, global = true, default_value_t = Budgets::default().multisets)]
    budget_multisets: u128,
    /// Largest number of column tuples a raw preservation check may visit.
    #[arg(long, global = true, default_value_t = Budgets::default().columns)]
    budget_columns: u128,
    /// Output format: json or text.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of a function: clone memberships, thresholdness, B_2 and B_3.
    Analyze {
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
    },
    /// Does f preserve B_l?
    Preserves {
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
        #[arg(long)]
        ell: usize,
        /// Enumerate columns of B_l instead of searching multisets.
        #[arg(long)]
        raw: bool,
    },
    /// Is f k-asummable?
    Asummable {
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
        #[arg(long)]
        k: usize,
    },
    /// Decide thresholdness, or verify a given certificate.
    Threshold {
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
        /// JSON certificate, e.g. '{"weights":["1","1"],"t":"2"}'.
        #[arg(long)]
        certificate: Option<String>,
        /// Also check that every identification minor is threshold.
        #[arg(long)]
        minimal: bool,
    },
    /// Clone membership. Without --clone, lists every catalogued clone containing f.
    Clone {
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
        #[arg(long)]
        clone: Option<CloneId>,
        /// Cross-check against preservation of the characterizing constraints.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Apply a construction; with --ell, carry a B_l violation of f along.
    Construct {
        #[arg(long)]
        tag: ConstructionTag,
        #[arg(long = "fn", value_parser = parse_fn)]
        function: BoolFn,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Checks on the Taylor-Zwicker function f_k.
    Tz {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        base: Option<u64>,
        /// all, rowcol, dot, monotone, or B=<l>.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Finite characterizability of C ∩ thr over the clone catalogue.
    Classify {
        #[arg(long)]
        clone: Option<CloneId>,
        /// Re-derive each row by membership on functions up to this arity.
        #[arg(long)]
        verify_arity: Option<usize>,
    },
    /// Functions preserving B_l, or the characterizing constraints of a clone.
    Pol {
        #[command(flatten)]
        target: ConstraintTarget,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Minimal forbidden minors of Pol B_l or of a clone.
    ForbiddenMinors {
        #[command(flatten)]
        target: ConstraintTarget,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Run a verification suite: paper-core, constructions, tz, classification or all.
    Suite {
        name: SuiteName,
        /// Record wall-clock time per check.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConstraintTarget {
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    clone: Option<CloneId>,
}

impl ConstraintTarget {
    fn name(&self) -> String {
        match (self.b, self.clone) {
            (Some(ell), _) => format!("B_{ell}"),
            (_, Some(c)) => c.to_string(),
            _ => unreachable!("clap requires one"),
        }
    }

    fn constraints(&self) -> Result<Vec<RelationalConstraint>> {
        match (self.b, self.clone) {
            (Some(ell), _) => Ok(vec![make_b(ell)?]),
            (_, Some(c)) => Ok(characterizing_constraints(c, DEFAULT_RANK_BOUND)?.constraints),
            _ => unreachable!("clap requires one"),
        }
    }
}

/// What a command produced: a report, or a plain value with a pass flag.
enum Output {
    Report(VerificationReport),
    Value { value: Value, pass: bool },
}

fn value(v: Value) -> Result<Output> {
    Ok(Output::Value { value: v, pass: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let budgets = Budgets {
        multisets: g.budget_multisets,
        columns: g.budget_columns,
    };
    match run(cli.command, g, budgets) {
        Ok(Output::Report(r)) => {
            let _ = std::io::stdout().write_all(&emit_report(&r, g.format));
            exit(r.pass)
        }
        Ok(Output::Value { value, pass }) => {
            print_value(&value, g.format);
            exit(pass)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn exit(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn print_value(v: &Value, format: Format) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = match (format, v) {
        (Format::Text, Value::Object(map)) => map.iter().try_for_each(|(k, v)| match v {
            Value::String(s) => writeln!(out, "{k}: {s}"),
            other => writeln!(out, "{k}: {other}"),
        }),
        _ => writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize")),
    };
}

fn run(command: Command, g: &Global, budgets: Budgets) -> Result<Output> {
    match command {
        Command::Analyze { function: f } => analyze(&f, budgets),
        Command::Preserves { function: f, ell, raw } => {
            if raw {
                let m = violation_witness(&f, &make_b(ell)?, budgets.columns)?;
                value(json!({ "fn": f, "ell": ell, "method": "columns", "preserves": m.is_none(), "witness": m }))
            } else {
                let w = equal_sums_witness(&f, ell, budgets.multisets)?;
                value(json!({ "fn": f, "ell": ell, "method": "multiset", "preserves": w.is_none(), "witness": w }))
            }
        }
        Command::Asummable { function: f, k } => {
            if k < 2 {
                return Err(Error::Domain("k must be at least 2".into()));
            }
            for ell in 2..=k {
                if let Some(w) = equal_sums_witness(&f, ell, budgets.multisets)? {
                    return value(json!({ "fn": f, "k": k, "asummable": false, "witness": w }));
                }
            }
            value(json!({ "fn": f, "k": k, "asummable": is_k_asummable(&f, k, budgets.multisets)? }))
        }
        Command::Threshold {
            function: f,
            certificate,
            minimal,
        } => threshold(&f, certificate.as_deref(), minimal),
        Command::Clone {
            function: f,
            clone,
            crosscheck,
        } => match clone {
            None => {
                let members: Vec<String> = CloneId::catalogue(DEFAULT_RANK_BOUND)
                    .into_iter()
                    .filter(|&c| is_member(&f, c))
                    .map(|c| c.to_string())
                    .collect();
                value(json!({ "fn": f, "clones": members }))
            }
            Some(c) => {
                let member = is_member(&f, c);
                if crosscheck {
                    let outcome = membership_crosscheck(&f, c, DEFAULT_RANK_BOUND, budgets.columns);
                    let pass = outcome.is_ok();
                    let detail = outcome.err().map(|e| e.to_string());
                    Ok(Output::Value {
                        value: json!({ "fn": f, "clone": c, "member": member, "crosscheck": pass, "error": detail }),
                        pass,
                    })
                } else {
                    value(json!({ "fn": f, "clone": c, "member": member }))
                }
            }
        },
        Command::Construct { tag, function: f, ell } => {
            let gf = tag.apply(&f)?;
            let member = is_member(&gf, tag.target());
            let mut out = json!({ "tag": tag, "fn": f, "result": gf, "arity": gf.arity(), "target": tag.target(), "member": member });
            if let Some(ell) = ell {
                let w = equal_sums_witness(&f, ell, budgets.multisets)?;
                let up = w.map(|w| transport_witness_up_to(&w, &f, &gf, tag)).transpose()?;
                out["ell"] = json!(ell);
                out["witness"] = json!(up);
            }
            Ok(Output::Value { value: out, pass: member })
        }
        Command::Tz { k, base, check } => tz(k, base, &check, g, budgets),
        Command::Classify { clone, verify_arity } => {
            let cat = match clone {
                Some(c) => vec![c],
                None => CloneId::catalogue(DEFAULT_RANK_BOUND),
            };
            if let Some(n) = verify_arity {
                check_classification_table(&cat, n)?;
            }
            let rows: Vec<Value> = cat.iter().map(|&c| json!(classify_intersection(c))).collect();
            value(json!({ "verified_arity": verify_arity, "table": rows }))
        }
        Command::Pol { target, max_arity } => {
            let pol = pol_enumerate(&target.constraints()?, max_arity, budgets.columns)?;
            let counts: Vec<Value> = pol.iter().map(|(n, fs)| json!({ "arity": n, "count": fs.len() })).collect();
            let small: Vec<&BoolFn> = pol.iter().filter(|(&n, _)| n <= 2).flat_map(|(_, fs)| fs).collect();
            value(json!({ "target": target.name(), "counts": counts, "members_up_to_arity_2": small }))
        }
        Command::ForbiddenMinors { target, max_arity } => {
            let qs = target.constraints()?;
            let cols = budgets.columns;
            let found = minimal_forbidden_minors(
                |f| {
                    for q in &qs {
                        if violation_witness(f, q, cols)?.is_some() {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                },
                max_arity,
            )?;
            value(json!({ "target": target.name(), "max_arity": max_arity, "minors": found }))
        }
        Command::Suite { name, timings } => Ok(Output::Report(run_suite(
            name,
            SuiteOptions {
                budgets,
                seed: g.seed,
                timings,
            },
        ))),
    }
}

fn analyze(f: &BoolFn, budgets: Budgets) -> Result<Output> {
    let clones: Vec<String> = CloneId::catalogue(DEFAULT_RANK_BOUND)
        .into_iter()
        .filter(|&c| is_member(f, c))
        .map(|c| c.to_string())
        .collect();
    let (certificate, hull_witness) = match separation(f)? {
        Separation::Threshold(c) => (Some(c), None),
        Separation::NotThreshold(w) => (None, w),
    };
    let b = |ell| match preserves_b_fast(f, ell, budgets.multisets) {
        Ok(v) => json!(v),
        Err(e) => json!(e.to_string()),
    };
    value(json!({
        "fn": f,
        "arity": f.arity(),
        "ones": f.count_ones(),
        "essential_variables": f.essential_variables(),
        "monotone": is_monotone(f),
        "self_dual": is_self_dual(f),
        "linear": is_linear(f),
        "threshold": certificate.is_some(),
        "certificate": certificate,
        "hull_witness": hull_witness,
        "preserves_b2": b(2),
        "preserves_b3": b(3),
        "clones": clones,
    }))
}

fn threshold(f: &BoolFn, certificate: Option<&str>, minimal: bool) -> Result<Output> {
    if let Some(text) = certificate {
        let cert: ThresholdCertificate =
            serde_json::from_str(text).map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })?;
        let ok = verify_certificate(f, &cert)?;
        return Ok(Output::Value {
            value: json!({ "fn": f, "certificate": cert, "valid": ok }),
            pass: ok,
        });
    }
    let mut out = match separation(f)? {
        Separation::Threshold(c) => json!({ "fn": f, "threshold": true, "certificate": c }),
        Separation::NotThreshold(w) => json!({ "fn": f, "threshold": false, "hull_witness": w }),
    };
    if minimal {
        let certs = identification_minor_certificates(f)?;
        let minors: Vec<Value> = certs
            .iter()
            .map(|((i, j), c)| json!({ "pair": [i, j], "certificate": c }))
            .collect();
        let all = certs.iter().all(|(_, c)| c.is_some());
        out["minimally_non_threshold"] = json!(out["threshold"] == json!(false) && all);
        out["minors"] = json!(minors);
    }
    value(out)
}

fn tz(k: usize, base: Option<u64>, check: &str, g: &Global, budgets: Budgets) -> Result<Output> {
    let inst = build_tz(k, base)?;
    let wanted: Vec<String> = match check {
        "all" => {
            let mut v: Vec<String> = ["rowcol", "dot", "monotone"].map(String::from).into();
            v.extend([2, 3, k].map(|ell| format!("B={ell}")));
            v.dedup();
            v
        }
        other => vec![other.to_string()],
    };
    let mut records = Vec::new();
    for name in &wanted {
        let outcome: Result<(bool, Value)> = match name.as_str() {
            "rowcol" => verify_row_col_lemma(k).map(|c| (c.holds, json!(c))),
            "dot" => verify_dot_classification(&inst).map(|ok| (ok, json!({ "points": 1u64 << inst.arity() }))),
            "monotone" => inst.function().map(|f| (is_monotone(f), json!({ "points": f.size() }))),
            b if b.starts_with("B=") => {
                let ell: usize = b[2..]
                    .parse()
                    .map_err(|_| Error::Parse { position: 2, message: format!("bad l in `{b}`") })?;
                let expected = ell % k != 0;
                if ell % k == 0 {
                    periodic_witness(&inst, ell).map(|w| (true, json!({ "ell": ell, "preserves": false, "witness": w })))
                } else {
                    tz_preserves_b(&inst, ell, budgets.multisets).map(|v| (v.preserves == expected, json!(v)))
                }
            }
            other => return Err(Error::Parse { position: 0, message: format!("unknown check `{other}`") }),
        };
        let (verdict, witness) = match outcome {
            Ok((true, w)) => (Verdict::Pass, w),
            Ok((false, w)) => (Verdict::Fail, w),
            Err(e @ Error::Resource { .. }) => (Verdict::Skipped, json!({ "error": e.to_string() })),
            Err(e) => return Err(e),
        };
        records.push(CheckRecord {
            claim: format!("f{k}-{}", name.replace("B=", "b")),
            anchor: format!("f_{k} {name}"),
            verdict,
            witness,
            elapsed_ms: None,
        });
    }
    Ok(Output::Report(VerificationReport::new(&format!("tz-k{k}"), g.seed, budgets, records)))
}
