//! Human-readable rendering.

use std::fmt::Write as _;

use hk4_core::classifier::CaseReport;
use hk4_core::exact::RatPoly;
use hk4_core::{RRPolynomial, Rational};
use serde_json::Value;

/// Writes P as s·binom(αT + β, n) when such a form exists with α ∈ {1, 1/2, 1/4}.
pub fn binomial_form(p: &RRPolynomial) -> Option<String> {
    let n = p.n;
    if p.base.degree() != Some(n as usize) {
        return None;
    }
    let lead = p.base.leading();
    let fact: Rational = (1..=n as i64).map(Rational::integer).product();
    for alpha in [Rational::one(), Rational::new(1, 2), Rational::new(1, 4)] {
        let s = &lead * &fact / alpha.pow(n);
        // T^{n−1} coefficient of s·binom(αT + β, n) is s α^{n−1} (nβ − n(n−1)/2) / n!
        let sub = p.base.coeff(n as usize - 1);
        let nn = Rational::integer(n as i64);
        let beta = (sub * &fact / (&s * alpha.pow(n - 1)) + &nn * (n as i64 - 1) / 2) / &nn;
        let inner = RatPoly::linear(alpha.clone(), beta.clone());
        let candidate = RatPoly::binomial_of(&inner, n).scale(&s);
        if candidate == p.base {
            let arg = match alpha.to_string().as_str() {
                "1" => "T".to_string(),
                a => format!("T/{}", &a[2..]),
            };
            let scale = if s == Rational::one() { String::new() } else { format!("{s}*") };
            let shift = if beta.is_negative() { format!(" - {}", -&beta) } else { format!(" + {beta}") };
            return Some(format!("{scale}binom({arg}{shift}, {n})"));
        }
    }
    None
}

/// Renders a rational with an optional approximate decimal.
pub fn rat(r: &Rational, decimal: bool) -> String {
    if decimal && !r.is_integer() {
        format!("{r} (~{:.6}, approx)", r.to_f64_lossy())
    } else {
        r.to_string()
    }
}

/// Compact single-line rendering of a JSON value; rational strings get a
/// decimal approximation when asked.
pub fn value(v: &Value, decimal: bool) -> String {
    match v {
        Value::String(s) => match s.parse::<Rational>() {
            Ok(r) if s.contains('/') => rat(&r, decimal),
            _ => s.clone(),
        },
        Value::Array(xs) => {
            let parts: Vec<String> = xs.iter().map(|x| value(x, decimal)).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, x)| format!("{k}: {}", value(x, decimal))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

pub fn case_report(r: &CaseReport, decimal: bool) -> String {
    let mut out = String::new();
    let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
    let _ = writeln!(out, "a = {}: {}", r.a, value(&verdict, false));
    for s in &r.solutions {
        let _ = writeln!(
            out,
            "  A_X = {}, gamma = {}, P(k) = {}",
            rat(&s.a_x, decimal),
            s.gamma,
            s.value_polynomial.to_string().replace('T', "k")
        );
        for o in &s.q_lm_options {
            let parity = serde_json::to_value(o.parity).expect("parity serializes");
            let form = binomial_form(&o.rr).unwrap_or_else(|| o.rr.base.to_string());
            let _ = writeln!(
                out,
                "    q(l,m) = {}, q(m) = {}, form {}, c_X = {}, P_RR(T) = {}",
                o.q_lm,
                o.q_m,
                value(&parity, false).to_uppercase(),
                o.c_x,
                form
            );
            for rej in &o.rejected_models {
                let _ = writeln!(out, "      rejected {:?}: {}", rej.model, rej.reason);
            }
        }
        for b in &s.betti_options {
            let _ = writeln!(out, "    (b2, b3, b4) = ({}, {}, {})  [{}]", b.b2, b.b3, b.b4, b.source);
        }
        for b in &s.betti_builtin_only {
            let _ = writeln!(out, "    (b2, b3, b4) = ({}, {}, {})  [{}]", b.b2, b.b3, b.b4, b.source);
        }
    }
    if !r.trace.is_empty() {
        let _ = writeln!(out, "  trace:");
        for t in &r.trace {
            let _ = writeln!(out, "    {} -- {}: {}", t.candidate, t.constraint.describe(), t.detail);
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}
