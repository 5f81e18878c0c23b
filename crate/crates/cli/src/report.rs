//! Report assembly and canonical JSON emission.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use hk4_core::classifier::{CaseReport, Parity};
use hk4_core::h4::certificates::Status;
use hk4_core::ledger::SectionCountLedger;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::checks::{compute, CheckId};
use crate::error::CliError;
use crate::expectations::{diff, Expectations};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "UNSAT-as-expected")]
    UnsatAsExpected,
    #[serde(rename = "FAIL")]
    Fail,
}

impl CheckStatus {
    pub fn passed(self) -> bool {
        self != CheckStatus::Fail
    }

    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::UnsatAsExpected => "UNSAT-as-expected",
            CheckStatus::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Status>,
    pub values: Value,
    pub expected: Value,
    pub diffs: Vec<String>,
}

impl CheckResult {
    pub fn judge(values: Value, expected: Value, verdict: Option<Status>) -> Self {
        let diffs = diff(&expected, &values);
        let status = match (diffs.is_empty(), verdict) {
            (false, _) => CheckStatus::Fail,
            (true, Some(Status::Unsat)) => CheckStatus::UnsatAsExpected,
            (true, _) => CheckStatus::Pass,
        };
        CheckResult { status, verdict, values, expected, diffs }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: BTreeMap<String, CheckResult>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classifications: BTreeMap<u64, CaseReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<SectionCountLedger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Value>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|c| c.status.passed())
    }

    pub fn failures(&self) -> usize {
        self.checks.values().filter(|c| !c.status.passed()).count()
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("malformed report: {e}")))
    }
}

/// Pretty JSON with object keys sorted at every depth.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    let mut s = serde_json::to_string_pretty(&sorted(v)).expect("value serializes");
    s.push('\n');
    s
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn run_check(id: CheckId, exp: &Expectations) -> Result<CheckResult, CliError> {
    let c = compute(id)?;
    Ok(CheckResult::judge(c.values, exp.check(id.name()), c.verdict))
}

/// Runs the checks on a pool of `jobs` threads (0 = rayon default) and
/// joins them into one report; also returns the wall time.
pub fn run_checks(
    ids: &[CheckId],
    exp: &Expectations,
    jobs: usize,
) -> Result<(Report, Duration), CliError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let results: Vec<(CheckId, Result<CheckResult, CliError>)> =
        pool.install(|| ids.par_iter().map(|&id| (id, run_check(id, exp))).collect());
    let mut report = Report::default();
    for (id, r) in results {
        report.checks.insert(id.name().to_string(), r?);
    }
    Ok((report, start.elapsed()))
}

fn parity_name(p: Parity) -> Value {
    serde_json::to_value(p).expect("parity serializes")
}

/// The part of a classification pinned down by the expectations file.
pub fn classification_summary(r: &CaseReport) -> Value {
    let solutions: Vec<Value> = r
        .solutions
        .iter()
        .map(|s| {
            let options: Vec<Value> = s
                .q_lm_options
                .iter()
                .map(|o| {
                    json!({
                        "q_lm": o.q_lm,
                        "q_m": o.q_m,
                        "c_x": o.c_x,
                        "parity": parity_name(o.parity),
                    })
                })
                .collect();
            json!({ "a_x": s.a_x, "gamma": s.gamma, "b": s.b, "c": s.c, "options": options })
        })
        .collect();
    json!({ "verdict": r.verdict, "solutions": solutions })
}

pub fn classification_check(r: &CaseReport, exp: &Expectations) -> CheckResult {
    let expected = exp.classify.get(&r.a).cloned().unwrap_or(Value::Null);
    CheckResult::judge(classification_summary(r), expected, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_at_depth() {
        let s = canonical_json(&json!({"b": {"z": 1, "a": 2}, "a": [ {"y": 0, "x": 1} ]}));
        let a = s.find("\"a\"").unwrap();
        let b = s.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(s.find("\"x\"").unwrap() < s.find("\"y\"").unwrap());
    }

    #[test]
    fn judge_labels() {
        let v = json!({"k": "1/2"});
        assert_eq!(CheckResult::judge(v.clone(), v.clone(), Some(Status::Unsat)).status, CheckStatus::UnsatAsExpected);
        assert_eq!(CheckResult::judge(v.clone(), v.clone(), None).status, CheckStatus::Pass);
        assert_eq!(CheckResult::judge(v, json!({"k": "1/3"}), None).status, CheckStatus::Fail);
    }
}
