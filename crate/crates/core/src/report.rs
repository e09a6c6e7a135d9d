// SPDX-License-Identifier: Apache-2.0

//! Verification reports and their JSON and text renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boolfn::BoolFn;
use crate::error::{Error, Result};

/// Version of the JSON layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not run to completion, for example because a budget was too small.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Stable identifier of the check.
    pub claim: String,
    /// The mathematical statement being checked.
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: Value,
    /// Wall-clock milliseconds; left out unless timings were requested, so
    /// that reports stay byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub multisets: u128,
    pub columns: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            multisets: crate::asummability::DEFAULT_MULTISET_BUDGET,
            columns: crate::constraints::DEFAULT_COLUMN_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub records: Vec<CheckRecord>,
    /// Every record passed.
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, budgets: Budgets, records: Vec<CheckRecord>) -> Self {
        let pass = records.iter().all(|r| r.verdict == Verdict::Pass);
        VerificationReport {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            seed,
            budgets,
            records,
            pass,
        }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == v).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::parse(0, format!("unknown format `{s}`"))),
        }
    }
}

/// `<arity>:<hex>` to a function.
pub fn parse_fn(text: &str) -> Result<BoolFn> {
    BoolFn::parse(text)
}

pub fn emit_report(r: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => render_text(r).into_bytes(),
    }
}

fn render_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {} (seed {})", r.suite, r.seed);
    for rec in &r.records {
        let tag = match rec.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIP",
        };
        let _ = write!(out, "{tag}  {:<28} {}", rec.claim, rec.anchor);
        if let Some(ms) = rec.elapsed_ms {
            let _ = write!(out, " [{ms} ms]");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "{}: {} passed, {} failed, {} skipped",
        if r.pass { "PASS" } else { "FAIL" },
        r.count(Verdict::Pass),
        r.count(Verdict::Fail),
        r.count(Verdict::Skipped)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record(v: Verdict) -> CheckRecord {
        CheckRecord {
            claim: "c".into(),
            anchor: "a".into(),
            verdict: v,
            witness: json!(null),
            elapsed_ms: None,
        }
    }

    #[test]
    fn pass_flag() {
        let b = Budgets::default();
        assert!(VerificationReport::new("s", 0, b, vec![record(Verdict::Pass)]).pass);
        assert!(!VerificationReport::new("s", 0, b, vec![record(Verdict::Skipped)]).pass);
        assert!(!VerificationReport::new("s", 0, b, vec![record(Verdict::Fail)]).pass);
    }

    #[test]
    fn json_layout() {
        let r = VerificationReport::new("s", 7, Budgets::default(), vec![record(Verdict::Pass)]);
        let v: Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["records"][0]["verdict"], "pass");
        assert!(v["records"][0].get("elapsed_ms").is_none());
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains("PASS  c"));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_fn("2:8").unwrap(), crate::boolfn::named::and2());
        assert_eq!(parse_fn("3:E8").unwrap(), crate::boolfn::named::maj3());
        assert!(matches!(parse_fn("2:G1"), Err(Error::Parse { .. })));
        assert!("yaml".parse::<Format>().is_err());
    }
}
