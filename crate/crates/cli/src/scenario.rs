//! Scenario files: a lattice, an isotropic class l, a second class m and the
//! Fujiki data, checked and routed through the classifier.

use std::path::{Path, PathBuf};

use hk4_core::classifier::{classify_with, CaseReport, Solution};
use hk4_core::fujiki::{a_from_fujiki, parse_betti_data, rr_constant_solutions, rr_lagrangian_form, BettiEntry};
use hk4_core::lattice::{normalize_classes, Normalization};
use hk4_core::{NSClass, QuadLattice, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::CheckId;
use crate::display::binomial_form;
use crate::error::CliError;
use crate::expectations::Expectations;
use crate::report::{classification_check, run_checks, Report};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub n: u32,
    pub gram: Vec<Vec<i64>>,
    pub l: Vec<i64>,
    pub m: Vec<i64>,
    #[serde(default, rename = "c_X")]
    pub c_x: Option<Rational>,
    #[serde(default, rename = "A_X")]
    pub a_x: Option<Rational>,
    #[serde(default)]
    pub a: Option<u64>,
    #[serde(default)]
    pub betti_data_path: Option<PathBuf>,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn load_betti(path: &Path) -> Result<Vec<BettiEntry>, CliError> {
    parse_betti_data(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("scenario schema: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut s = Scenario::parse(&read_file(path)?)?;
        // relative data paths are taken from the scenario's directory
        if let (Some(p), Some(dir)) = (&s.betti_data_path, path.parent()) {
            if p.is_relative() {
                s.betti_data_path = Some(dir.join(p));
            }
        }
        Ok(s)
    }
}

/// Validated scenario data before classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ingested {
    pub n: u32,
    pub q_lm: i64,
    pub normalization: Normalization,
    pub normalized_m: NSClass,
    pub a: u64,
    pub c_x: Option<Rational>,
}

pub fn ingest(s: &Scenario) -> Result<Ingested, CliError> {
    if s.n == 0 {
        return Err(CliError::Usage("scenario schema: n must be positive".into()));
    }
    let lattice = QuadLattice::new(s.gram.clone())
        .map_err(|e| CliError::Usage(format!("scenario schema: {e}")))?;
    let l = NSClass::new(s.l.clone());
    let m = NSClass::new(s.m.clone());
    for v in [&l, &m] {
        lattice.check(v).map_err(|e| CliError::Usage(format!("scenario schema: {e}")))?;
    }
    let q_l = lattice.q(&l);
    if q_l != 0 {
        return Err(CliError::Precondition(format!("q(l) = {q_l}, but l must be isotropic")));
    }
    if lattice.pair(&l, &m) == 0 {
        return Err(CliError::Precondition("q(l,m) = 0".into()));
    }
    let (normalized_m, normalization) = normalize_classes(&lattice, &l, &m)?;
    let q_lm = normalization.q_lm;
    let from_fujiki = match &s.c_x {
        Some(c) if !c.is_positive() => {
            return Err(CliError::Precondition(format!("c_X = {c} must be positive")));
        }
        Some(c) => {
            let a = a_from_fujiki(s.n, c, &Rational::integer(q_lm));
            match a.to_i64() {
                Some(v) if v >= 1 => Some(v as u64),
                _ => {
                    return Err(CliError::Precondition(format!(
                        "a = {a} from the Fujiki relation is not a positive integer"
                    )))
                }
            }
        }
        None => None,
    };
    let a = match (from_fujiki, s.a) {
        (Some(x), Some(y)) if x != y => {
            return Err(CliError::Precondition(format!("given a = {y} but the Fujiki relation gives {x}")));
        }
        (Some(x), _) | (None, Some(x)) => x,
        (None, None) => return Err(CliError::Usage("scenario schema: need c_X or a".into())),
    };
    if a == 0 {
        return Err(CliError::Precondition("a must be at least 1".into()));
    }
    Ok(Ingested { n: s.n, q_lm, normalization, normalized_m, a, c_x: s.c_x.clone() })
}

/// The classifier solution matching the scenario's normalized data, if any.
fn matching<'a>(r: &'a CaseReport, ing: &Ingested, a_x: Option<&Rational>) -> Vec<(&'a Solution, usize)> {
    let mut out = Vec::new();
    for s in &r.solutions {
        if s.gamma != ing.normalization.gamma || a_x.is_some_and(|x| *x != s.a_x) {
            continue;
        }
        for (i, o) in s.q_lm_options.iter().enumerate() {
            if o.q_lm == ing.q_lm && ing.c_x.as_ref().is_none_or(|c| *c == o.c_x) {
                out.push((s, i));
            }
        }
    }
    out
}

/// Checks run for a detected case.
fn relevant_checks(ing: &Ingested) -> Vec<CheckId> {
    let k3_type = ing.n == 2 && ing.a == 1 && ing.c_x.as_ref().is_none_or(|c| *c == Rational::integer(3));
    if k3_type {
        CheckId::ALL.to_vec()
    } else if ing.n == 2 {
        vec![CheckId::GuanGate, CheckId::Bounds, CheckId::Star]
    } else {
        Vec::new()
    }
}

pub struct ScenarioOutcome {
    pub report: Report,
    /// False when the scenario's data matches no classifier solution.
    pub consistent: bool,
}

pub fn run(
    s: &Scenario,
    betti_override: Option<&[BettiEntry]>,
    exp: &Expectations,
    jobs: usize,
) -> Result<ScenarioOutcome, CliError> {
    let ing = ingest(s)?;
    let betti = match (betti_override, &s.betti_data_path) {
        (Some(b), _) => b.to_vec(),
        (None, Some(p)) => load_betti(p)?,
        (None, None) => hk4_core::fujiki::bundled_betti_data(),
    };
    let ids = relevant_checks(&ing);
    let (mut report, _) = run_checks(&ids, exp, jobs)?;
    let mut summary = json!({
        "name": s.name,
        "n": ing.n,
        "a": ing.a,
        "q_lm": ing.q_lm,
        "normalization": ing.normalization,
        "normalized_m": ing.normalized_m,
        "c_x": ing.c_x,
    });
    let consistent;
    if ing.n == 2 {
        let r = classify_with(ing.a, &betti)?;
        let hits = matching(&r, &ing, s.a_x.as_ref());
        consistent = !hits.is_empty();
        let blocks: Vec<Value> = hits
            .iter()
            .map(|(sol, i)| {
                let o = &sol.q_lm_options[*i];
                json!({
                    "a_x": sol.a_x,
                    "gamma": sol.gamma,
                    "q_lm": o.q_lm,
                    "parity": o.parity,
                    "c_x": o.c_x,
                    "p_rr": o.rr.base,
                    "p_rr_binomial": binomial_form(&o.rr),
                    "betti": sol.betti_options,
                })
            })
            .collect();
        summary["matched"] = Value::Array(blocks);
        if exp.classify.contains_key(&ing.a) {
            report.checks.insert(format!("classify-{}", ing.a), classification_check(&r, exp));
        }
        report.classifications.insert(ing.a, r);
    } else {
        // P_RR(0) = n + 1 pins the shift of the Lagrangian form
        let mut forms = Vec::new();
        for d in rr_constant_solutions(ing.n) {
            let Some(d) = d.to_i64().filter(|d| *d >= 0) else { continue };
            let rr = rr_lagrangian_form(ing.n, d, ing.q_lm, ing.normalization.q_m)?;
            let implied = rr.implied_c_x();
            if ing.c_x.as_ref().is_some_and(|c| *c != implied) {
                continue;
            }
            forms.push(json!({
                "d": d,
                "p_rr": rr.base,
                "p_rr_binomial": binomial_form(&rr),
                "implied_c_x": implied,
            }));
        }
        consistent = !forms.is_empty();
        summary["rr_forms"] = Value::Array(forms);
    }
    summary["consistent"] = json!(consistent);
    report.scenario = Some(summary);
    Ok(ScenarioOutcome { report, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Scenario {
        Scenario::parse(r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,0], "m": [0,1], "c_X": 3}"#).unwrap()
    }

    #[test]
    fn ingest_k3() {
        let i = ingest(&k3()).unwrap();
        assert_eq!((i.a, i.q_lm), (1, 1));
    }

    #[test]
    fn precondition_codes() {
        let mut s = k3();
        s.l = vec![1, 1];
        assert_eq!(ingest(&s).unwrap_err().exit_code(), 3);
        let mut s = k3();
        s.c_x = None;
        assert_eq!(ingest(&s).unwrap_err().exit_code(), 2);
        let mut s = k3();
        s.a = Some(2);
        assert_eq!(ingest(&s).unwrap_err().exit_code(), 3);
        assert!(Scenario::parse(r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,0], "m": [0,1], "bogus": 1}"#).is_err());
    }

    #[test]
    fn sign_and_shift_normalized() {
        let mut s = k3();
        s.m = vec![3, -1];
        let i = ingest(&s).unwrap();
        assert_eq!(i.normalized_m, NSClass::new(vec![0, 1]));
        assert_eq!(i.a, 1);
    }
}
