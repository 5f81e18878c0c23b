//! Bounded Diophantine classification of the polarization degree `a`.
//!
//! The pipeline is fixed: square-root gate on A_X, then the b/γ window
//! search, then admissibility of q(l,m) and the parity of the form. Every
//! rejected candidate lands in the trace together with the constraint that
//! killed it.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, integer_valued_on, is_perfect_square, non_integer_witness, sqrt_rational,
    squarefree_part, RatPoly, Rational,
};
use crate::fujiki::{
    admissible_a_numerators, betti_profile, builtin_betti_candidates, bundled_betti_data,
    rr_from_cx_ax, BettiEntry, RRPolynomial,
};
use crate::lattice::saturation_check;

/// One point of the b/γ search that passed every constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierState {
    pub a: u64,
    pub a_x: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl ClassifierState {
    /// P(k) = (a/2) k² + b k + c.
    pub fn value_polynomial(&self) -> RatPoly {
        RatPoly::new(vec![
            self.c.clone(),
            self.b.clone(),
            Rational::new(self.a as i64, 2),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// a · 288 A_X must be a perfect square.
    SqrtGate,
    /// 4 A_X − b²/(2a) = 3 − c must be an integer.
    CIntegral,
    /// q(m) = γ q(l,m) must be an integer.
    QmIntegral,
    /// P_RR must be integer-valued on the values of q_X in the even model.
    EvenModel,
    /// P_RR must be integer-valued on the values of q_X in the odd model.
    OddModel,
    /// The second difference forces q(l,m)² | a.
    SecondDifference,
}

impl Constraint {
    pub fn describe(self) -> &'static str {
        match self {
            Constraint::SqrtGate => "sqrt(2 a A_X) rational",
            Constraint::CIntegral => "4A_X - b^2/(2a) in Z",
            Constraint::QmIntegral => "q(m) = gamma q(l,m) in Z",
            Constraint::EvenModel => "P_RR integer-valued on even T",
            Constraint::OddModel => "P_RR integer-valued on all integers T",
            Constraint::SecondDifference => "q(l,m)^2 divides a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub candidate: String,
    pub constraint: Constraint,
    pub detail: String,
}

impl TraceEntry {
    fn new(candidate: String, constraint: Constraint, detail: String) -> Self {
        TraceEntry { candidate, constraint, detail }
    }
}

/// Admissible A_X for a given a: a·N must be a perfect square, A_X = N/288.
pub fn sqrt_gate(a: u64) -> Vec<Rational> {
    sqrt_gate_traced(a).0
}

fn sqrt_gate_traced(a: u64) -> (Vec<Rational>, Vec<TraceEntry>) {
    let mut pass = Vec::new();
    let mut trace = Vec::new();
    for n in admissible_a_numerators() {
        let a_x = Rational::new(n, 288);
        let prod = a as i64 * n;
        if is_perfect_square(prod) {
            pass.push(a_x);
        } else {
            trace.push(TraceEntry::new(
                format!("A_X = {a_x}"),
                Constraint::SqrtGate,
                format!("a * 288 A_X = {prod} is not a perfect square"),
            ));
        }
    }
    (pass, trace)
}

/// β = 2 √(2 a A_X), when rational.
pub fn beta(a: u64, a_x: &Rational) -> Option<Rational> {
    let radicand = a_x * (2 * a as i64);
    sqrt_rational(&radicand).ok().flatten().map(|r| r * 2)
}

fn parity_label(b: &Rational) -> &'static str {
    match b.to_integer() {
        Some(n) if n.bit(0) => "odd",
        Some(_) => "even",
        None => "half-integer",
    }
}

/// All states in the window b ∈ (β − a/2, β + a/2], a/2 + b ∈ Z, with c ∈ Z.
pub fn gamma_search(a: u64, a_x: &Rational) -> Result<Vec<ClassifierState>> {
    Ok(gamma_search_traced(a, a_x)?.0)
}

fn gamma_search_traced(
    a: u64,
    a_x: &Rational,
) -> Result<(Vec<ClassifierState>, Vec<TraceEntry>)> {
    let beta = beta(a, a_x).ok_or_else(|| {
        Error::Precondition(format!("sqrt(2 a A_X) irrational for a = {a}, A_X = {a_x}"))
    })?;
    let ai = a as i64;
    let half_a = Rational::new(ai, 2);
    // b = a/2 + k with k integral, β − a < k ≤ β
    let k_lo = (&beta - ai).floor() + 1;
    let k_hi = beta.floor();
    let mut states = Vec::new();
    let mut trace = Vec::new();
    let mut k: BigInt = k_lo;
    while k <= k_hi {
        let b = &half_a + Rational::from_bigint(k.clone());
        let gamma = (&b - &beta) * 2 / ai;
        let c = Rational::new(ai, 8) * &gamma * &gamma + &gamma * &beta / 2 + 3;
        let defect = a_x * 4 - &b * &b / (2 * ai);
        debug_assert_eq!(defect, Rational::integer(3) - &c);
        if c.is_integer() {
            states.push(ClassifierState {
                a,
                a_x: a_x.clone(),
                beta: beta.clone(),
                gamma,
                b,
                c,
            });
        } else {
            trace.push(TraceEntry::new(
                format!("A_X = {a_x}, b = {b} ({}), gamma = {gamma}", parity_label(&b)),
                Constraint::CIntegral,
                format!("4A_X - b^2/(2a) = {defect} is not an integer"),
            ));
        }
        k += 1;
    }
    Ok((states, trace))
}

/// Parity of the BBF form admitted for a given q(l,m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Unconstrained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRejection {
    pub model: Constraint,
    pub witness_t: Option<i64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlmOption {
    pub q_lm: i64,
    pub q_m: i64,
    pub parity: Parity,
    pub c_x: Rational,
    pub rr: RRPolynomial,
    pub rejected_models: Vec<ModelRejection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlmDecision {
    pub options: Vec<QlmOption>,
    pub trace: Vec<TraceEntry>,
}

const WITNESS_RADIUS: i64 = 32;

/// Decides which q(l,m) and which parity of q_X are compatible with
/// (a, A_X, γ) under the U ⊕ U value model.
///
/// q_X takes all even values (even form) or all integer values (odd form);
/// P_RR must be integer-valued there. Its second difference along stride s
/// is s² a / (4 q²), so q² | a and the scan 1 ≤ q ≤ √(3a) is exhaustive.
pub fn admissible_qlm(a: u64, a_x: &Rational, gamma: &Rational) -> Result<QlmDecision> {
    let ai = a as i64;
    let q_max = (3 * ai).isqrt();
    let mut options = Vec::new();
    let mut trace = Vec::new();
    for q in 1..=q_max {
        let cand = format!("a = {a}, A_X = {a_x}, gamma = {gamma}, q(l,m) = {q}");
        let c_x = Rational::new(3 * ai, q * q);
        let q_m = gamma * q;
        let Some(q_m) = q_m.to_i64() else {
            trace.push(TraceEntry::new(
                cand,
                Constraint::QmIntegral,
                format!("q(m) = {q_m} is not an integer"),
            ));
            continue;
        };
        let rr = match rr_from_cx_ax(&c_x, a_x)?.poly() {
            Some(p) => p.clone(),
            None => {
                trace.push(TraceEntry::new(
                    cand,
                    Constraint::SqrtGate,
                    "irrational linear coefficient".into(),
                ));
                continue;
            }
        };
        let mut rejected = Vec::new();
        let even_ok = if q_m % 2 != 0 {
            rejected.push(ModelRejection {
                model: Constraint::EvenModel,
                witness_t: Some(q_m),
                reason: format!("q(m) = {q_m} is odd, so the form is not even"),
            });
            false
        } else if integer_valued_on(&rr.base, 2, 0) {
            true
        } else {
            let w = non_integer_witness(&rr.base, 2, 0, WITNESS_RADIUS);
            rejected.push(ModelRejection {
                model: Constraint::EvenModel,
                witness_t: w,
                reason: model_reason(&rr, w),
            });
            false
        };
        let odd_ok = if integer_valued_on(&rr.base, 1, 0) {
            true
        } else {
            let w = non_integer_witness(&rr.base, 1, 0, WITNESS_RADIUS);
            rejected.push(ModelRejection {
                model: Constraint::OddModel,
                witness_t: w,
                reason: model_reason(&rr, w),
            });
            false
        };
        let parity = match (even_ok, odd_ok) {
            (true, true) => Parity::Unconstrained,
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (false, false) => {
                let constraint = if ai % (q * q) != 0 {
                    Constraint::SecondDifference
                } else {
                    Constraint::EvenModel
                };
                let detail = rejected
                    .iter()
                    .map(|r| r.reason.clone())
                    .collect::<Vec<_>>()
                    .join("; ");
                trace.push(TraceEntry::new(cand, constraint, detail));
                continue;
            }
        };
        options.push(QlmOption { q_lm: q, q_m, parity, c_x, rr, rejected_models: rejected });
    }
    Ok(QlmDecision { options, trace })
}

fn model_reason(rr: &RRPolynomial, witness: Option<i64>) -> String {
    match witness {
        Some(t) => format!("P_RR({t}) = {} is not an integer", rr.eval_int(t)),
        None => "a Newton coefficient is not an integer".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiOption {
    pub b2: i64,
    pub b3: i64,
    pub b4: i64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub a_x: Rational,
    pub gamma: Rational,
    pub b: Rational,
    pub c: Rational,
    pub value_polynomial: RatPoly,
    pub q_lm_options: Vec<QlmOption>,
    pub betti_options: Vec<BettiOption>,
    /// Pairs allowed by the built-in relations but absent from the data file.
    pub betti_builtin_only: Vec<BettiOption>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Empty,
    Solutions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub a: u64,
    pub verdict: Verdict,
    pub solutions: Vec<Solution>,
    pub trace: Vec<TraceEntry>,
    pub notes: Vec<String>,
}

pub fn classify(a: u64) -> Result<CaseReport> {
    classify_with(a, &bundled_betti_data())
}

pub fn classify_with(a: u64, betti_data: &[BettiEntry]) -> Result<CaseReport> {
    if a == 0 {
        return Err(Error::Precondition("a must be at least 1".into()));
    }
    let (gate, mut trace) = sqrt_gate_traced(a);
    let mut solutions = Vec::new();
    let mut notes = Vec::new();
    for a_x in &gate {
        let (states, killed) = gamma_search_traced(a, a_x)?;
        if let Some(note) = b_parity_note(&states, &killed) {
            notes.push(format!("A_X = {a_x}: {note}"));
        }
        trace.extend(killed);
        for st in states {
            let decision = admissible_qlm(a, a_x, &st.gamma)?;
            trace.extend(decision.trace);
            if decision.options.is_empty() {
                continue;
            }
            let (betti_options, betti_builtin_only) = betti_options(a_x, betti_data);
            solutions.push(Solution {
                value_polynomial: st.value_polynomial(),
                a_x: st.a_x,
                gamma: st.gamma,
                b: st.b,
                c: st.c,
                q_lm_options: decision.options,
                betti_options,
                betti_builtin_only,
            });
        }
    }
    let verdict = if solutions.is_empty() { Verdict::Empty } else { Verdict::Solutions };
    Ok(CaseReport { a, verdict, solutions, trace, notes })
}

/// When every surviving b is an odd integer and every integer b killed by
/// c-integrality is even, the constraint reads "b is odd".
fn b_parity_note(states: &[ClassifierState], killed: &[TraceEntry]) -> Option<String> {
    if states.is_empty() || !states.iter().all(|s| parity_label(&s.b) == "odd") {
        return None;
    }
    let killed_even = killed.iter().filter(|t| t.candidate.contains("(even)")).count();
    if killed_even == 0 || killed_even != killed.len() {
        return None;
    }
    Some("c in Z holds exactly for odd b, so b is odd".into())
}

fn betti_options(a_x: &Rational, data: &[BettiEntry]) -> (Vec<BettiOption>, Vec<BettiOption>) {
    let mut from_data: Vec<BettiOption> = data
        .iter()
        .filter_map(|e| {
            let p = betti_profile(e.b2, e.b3).ok()?;
            (p.a_x == *a_x && p.is_clean()).then(|| BettiOption {
                b2: p.b2,
                b3: p.b3,
                b4: p.b4,
                source: e.source.clone(),
            })
        })
        .collect();
    from_data.sort_by_key(|o| std::cmp::Reverse((o.b2, o.b3)));
    let builtin_only = builtin_betti_candidates(a_x)
        .into_iter()
        .filter(|p| !from_data.iter().any(|o| o.b2 == p.b2 && o.b3 == p.b3))
        .map(|p| BettiOption {
            b2: p.b2,
            b3: p.b3,
            b4: p.b4,
            source: "admitted by built-in constraints, excluded by data file".into(),
        })
        .collect();
    (from_data, builtin_only)
}

/// Square-free parts of the admissible numerators N = 288 A_X.
pub fn squarefree_a_filter() -> BTreeSet<u64> {
    admissible_a_numerators()
        .into_iter()
        .map(|n| squarefree_part(n as u64))
        .collect()
}

/// a · 3ⁿ · (2n)! / (2ⁿ n!).
pub fn fujiki_degree_bound(n: u32, a: u64) -> Rational {
    let num = BigInt::from(a) * BigInt::from(3u32).pow(n) * factorial(2 * n);
    let den = BigInt::from(2u32).pow(n) * factorial(n);
    Rational::from_bigints(num, den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarConclusion {
    HypothesesFail,
    NoConstraint,
    EvenForm,
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub n: u32,
    pub c: u64,
    pub c_prime: u64,
    pub q: u64,
    pub scaled: RatPoly,
    pub c_prime_nth_power_free: bool,
    pub monic_integral: bool,
    pub conclusion: StarConclusion,
}

/// Decision form of the arithmetic star lemma.
///
/// If c′ has no nontrivial n-th power divisor and (c/c′) P_RR(qT) is monic
/// with integer coefficients, q divides every value of q_X; a nondivisible
/// form then forces q = 1, or q = 2 with q_X even.
pub fn star_lemma(n: u32, c: u64, c_prime: u64, q: u64, p_rr: &RRPolynomial) -> StarReport {
    assert!(c >= 1 && c_prime >= 1 && q >= 1);
    let scaled = p_rr
        .base
        .compose(&RatPoly::linear(Rational::integer(q as i64), Rational::zero()))
        .scale(&Rational::new(c as i64, c_prime as i64));
    let c_prime_nth_power_free = saturation_check(c_prime, n);
    let monic_integral = scaled.degree() == Some(n as usize)
        && scaled.leading() == Rational::one()
        && scaled.coeffs().iter().all(Rational::is_integer);
    let conclusion = if !(c_prime_nth_power_free && monic_integral) {
        StarConclusion::HypothesesFail
    } else {
        match q {
            1 => StarConclusion::NoConstraint,
            2 => StarConclusion::EvenForm,
            _ => StarConclusion::Contradiction,
        }
    };
    StarReport {
        n,
        c,
        c_prime,
        q,
        scaled,
        c_prime_nth_power_free,
        monic_integral,
        conclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::fujiki::rr_lagrangian_form;

    fn int(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn sqrt_gate_values() {
        assert_eq!(sqrt_gate(1), vec![q(25, 32), q(8, 9)]);
        assert_eq!(sqrt_gate(2), vec![q(121, 144)]);
        assert_eq!(sqrt_gate(3), vec![q(27, 32)]);
        assert_eq!(sqrt_gate(4), vec![q(25, 32), q(8, 9)]);
        assert!(sqrt_gate(6).is_empty());
    }

    #[test]
    fn gamma_search_a1() {
        let s = gamma_search(1, &q(25, 32)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].gamma.clone(), s[0].b.clone(), s[0].c.clone()), (int(0), q(5, 2), int(3)));
        let (s, t) = gamma_search_traced(1, &q(8, 9)).unwrap();
        assert!(s.is_empty());
        assert_eq!(t.len(), 1);
        assert!(t[0].detail.contains("31/72"));
    }

    #[test]
    fn gamma_search_a4() {
        let s = gamma_search(4, &q(25, 32)).unwrap();
        let got: Vec<_> = s.iter().map(|s| (s.gamma.clone(), s.b.clone(), s.c.clone())).collect();
        assert_eq!(got, vec![(int(0), int(5), int(3)), (int(1), int(7), int(6))]);
        assert!(gamma_search(4, &q(8, 9)).unwrap().is_empty());
    }

    #[test]
    fn qlm_decisions() {
        let d = admissible_qlm(1, &q(25, 32), &int(0)).unwrap();
        assert_eq!(d.options.len(), 1);
        assert_eq!((d.options[0].q_lm, d.options[0].parity), (1, Parity::Even));
        let d = admissible_qlm(3, &q(27, 32), &int(0)).unwrap();
        assert_eq!(d.options.len(), 1);
        assert_eq!(d.options[0].c_x, int(9));
        let d = admissible_qlm(4, &q(25, 32), &int(0)).unwrap();
        let got: Vec<_> = d.options.iter().map(|o| (o.q_lm, o.parity, o.c_x.clone())).collect();
        assert_eq!(got, vec![(1, Parity::Unconstrained, int(12)), (2, Parity::Even, int(3))]);
        let d = admissible_qlm(4, &q(25, 32), &int(1)).unwrap();
        let got: Vec<_> = d.options.iter().map(|o| (o.q_lm, o.parity)).collect();
        assert_eq!(got, vec![(1, Parity::Odd), (2, Parity::Even)]);
    }

    #[test]
    fn classify_verdicts() {
        for a in [2, 5, 6, 7, 8] {
            assert_eq!(classify(a).unwrap().verdict, Verdict::Empty, "a = {a}");
        }
        let r = classify(1).unwrap();
        assert_eq!(r.solutions.len(), 1);
        let r = classify(4).unwrap();
        assert_eq!(r.solutions.len(), 2);
        assert!(r.notes.iter().any(|n| n.contains("b is odd")));
        assert!(classify(0).is_err());
    }

    #[test]
    fn filters_and_bounds() {
        let s = squarefree_a_filter();
        for a in [1, 2, 3, 5, 7, 10] {
            assert!(s.contains(&a));
        }
        assert!(!s.contains(&6));
        assert_eq!(fujiki_degree_bound(2, 1), int(27));
        assert_eq!(fujiki_degree_bound(2, 3), int(81));
        assert_eq!(fujiki_degree_bound(1, 1), int(3));
    }

    #[test]
    fn star() {
        let p = rr_lagrangian_form(2, 1, 1, 0).unwrap();
        let r = star_lemma(2, 2, 1, 2, &p);
        assert_eq!(r.scaled, RatPoly::from_ints(&[6, 5, 1]));
        assert_eq!(r.conclusion, StarConclusion::EvenForm);
        let p = rr_lagrangian_form(2, 1, 2, 0).unwrap();
        assert_eq!(star_lemma(2, 2, 1, 4, &p).conclusion, StarConclusion::Contradiction);
        let p = rr_lagrangian_form(2, 1, 1, 0).unwrap();
        assert_eq!(star_lemma(2, 2, 1, 1, &p).conclusion, StarConclusion::HypothesesFail);
        assert_eq!(star_lemma(2, 2, 4, 2, &p).conclusion, StarConclusion::HypothesesFail);
    }
}
