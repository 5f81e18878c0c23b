//! Fujiki calculus, Riemann–Roch polynomials and the Betti/A_X relations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{divisors, factorial, q, sqrt_rational, RatPoly, Rational};
use crate::lattice::{NSClass, QuadLattice};

/// Half-dimension and Fujiki constant of a hyper-Kähler manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FujikiData {
    pub n: u32,
    pub c_x: Rational,
}

impl FujikiData {
    pub fn new(n: u32, c_x: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        if !c_x.is_positive() {
            return Err(Error::Precondition(format!("c_X = {c_x} must be positive")));
        }
        Ok(FujikiData { n, c_x })
    }

    pub fn degree(&self, q_value: &Rational) -> Rational {
        fujiki_degree(self.n, &self.c_x, q_value)
    }
}

fn fact(n: u32) -> Rational {
    Rational::from_bigint(factorial(n))
}

/// ∫ α^{2n} = c_X · q(α)^n.
pub fn fujiki_degree(n: u32, c_x: &Rational, q_value: &Rational) -> Rational {
    c_x * q_value.pow(n)
}

/// ∫ lⁿmⁿ for an isotropic l: c_X · q(l,m)ⁿ · 2ⁿ · n!² / (2n)!.
pub fn polarized_pairing_n(n: u32, c_x: &Rational, q_lm: &Rational) -> Rational {
    c_x * q_lm.pow(n) * Rational::integer(2).pow(n) * fact(n) * fact(n) / fact(2 * n)
}

/// a = (1/n!) ∫ lⁿmⁿ = c_X · 2ⁿ · q(l,m)ⁿ · n! / (2n)!.
pub fn a_from_fujiki(n: u32, c_x: &Rational, q_lm: &Rational) -> Rational {
    c_x * Rational::integer(2).pow(n) * q_lm.pow(n) * fact(n) / fact(2 * n)
}

/// ∫ α1 α2 α3 α4 on a fourfold, from 3∫α1α2α3α4 = c_X (q12 q34 + q13 q24 + q14 q23).
pub fn fujiki4_pairing(c_x: &Rational, lattice: &QuadLattice, alphas: [&NSClass; 4]) -> Rational {
    let p = |i: usize, j: usize| lattice.pair(alphas[i], alphas[j]);
    let s = p(0, 1) * p(2, 3) + p(0, 2) * p(1, 3) + p(0, 3) * p(1, 2);
    c_x * s / 3
}

/// Same identity with rational coordinates.
pub fn fujiki4_pairing_rational(
    c_x: &Rational,
    lattice: &QuadLattice,
    alphas: [&[Rational]; 4],
) -> Rational {
    let p = |i: usize, j: usize| lattice.pair_rational(alphas[i], alphas[j]);
    let s = p(0, 1) * p(2, 3) + p(0, 2) * p(1, 3) + p(0, 3) * p(1, 2);
    c_x * s / 3
}

/// Riemann–Roch polynomial in the BBF variable T.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RRPolynomial {
    pub n: u32,
    pub base: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RrViolation {
    ConstantTerm { expected: Rational, got: Rational },
    LeadingCoefficient { expected: Rational, got: Rational },
    NonPositiveCoefficient { index: usize, value: Rational },
    Degree { expected: u32, got: Option<usize> },
}

impl RRPolynomial {
    pub fn new(n: u32, base: RatPoly) -> Self {
        RRPolynomial { n, base }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.base.eval(t)
    }

    pub fn eval_int(&self, t: i64) -> Rational {
        self.base.eval(&Rational::integer(t))
    }

    /// The Fujiki constant read off the leading coefficient.
    pub fn implied_c_x(&self) -> Rational {
        self.base.coeff(self.n as usize) * fact(2 * self.n)
    }

    /// Checks the constant term n+1, the leading coefficient c_X/(2n)! and
    /// positivity of all coefficients.
    pub fn violations(&self, c_x: Option<&Rational>) -> Vec<RrViolation> {
        let mut out = Vec::new();
        if self.base.degree() != Some(self.n as usize) {
            out.push(RrViolation::Degree { expected: self.n, got: self.base.degree() });
        }
        let expected = Rational::integer(self.n as i64 + 1);
        let got = self.base.coeff(0);
        if got != expected {
            out.push(RrViolation::ConstantTerm { expected, got });
        }
        if let Some(c) = c_x {
            let expected = c / fact(2 * self.n);
            let got = self.base.coeff(self.n as usize);
            if got != expected {
                out.push(RrViolation::LeadingCoefficient { expected, got });
            }
        }
        for i in 0..=self.n as usize {
            let value = self.base.coeff(i);
            if !value.is_positive() {
                out.push(RrViolation::NonPositiveCoefficient { index: i, value });
            }
        }
        out
    }
}

/// Result of building P_RR from (c_X, A_X) in dimension four.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RrOutcome {
    Polynomial { poly: RRPolynomial },
    Irrational { radicand: Rational },
}

impl RrOutcome {
    pub fn poly(&self) -> Option<&RRPolynomial> {
        match self {
            RrOutcome::Polynomial { poly } => Some(poly),
            RrOutcome::Irrational { .. } => None,
        }
    }
}

/// P_RR(T) = (c_X/24) T² + T·√(2 c_X A_X / 3) + 3.
pub fn rr_from_cx_ax(c_x: &Rational, a_x: &Rational) -> Result<RrOutcome> {
    let radicand = Rational::integer(2) * c_x * a_x / 3;
    Ok(match sqrt_rational(&radicand)? {
        Some(root) => RrOutcome::Polynomial {
            poly: RRPolynomial::new(
                2,
                RatPoly::new(vec![Rational::integer(3), root, c_x / 24]),
            ),
        },
        None => RrOutcome::Irrational { radicand },
    })
}

/// binom(d + (T − q(m)) / (2 q(l,m)) + n, n).
pub fn rr_lagrangian_form(n: u32, d: i64, q_lm: i64, q_m: i64) -> Result<RRPolynomial> {
    if q_lm <= 0 {
        return Err(Error::Precondition(format!("q(l,m) = {q_lm} must be positive")));
    }
    let inner = RatPoly::linear(
        Rational::new(1, 2 * q_lm),
        Rational::integer(d + n as i64) - Rational::new(q_m, 2 * q_lm),
    );
    Ok(RRPolynomial::new(n, RatPoly::binomial_of(&inner, n)))
}

/// Solutions of binom(x + n, n) = n + 1.
///
/// The equation is ∏_{i=1}^{n} (x + i) = (n+1)!, a monic integer polynomial,
/// so every rational root is an integer dividing its constant term n! − (n+1)!.
pub fn rr_constant_solutions(n: u32) -> BTreeSet<Rational> {
    assert!(n >= 1);
    let target = Rational::from_bigint(factorial(n + 1));
    let product = |x: &Rational| -> Rational { (1..=n as i64).map(|i| x + i).product() };
    let constant = factorial(n) - factorial(n + 1);
    let mut out = BTreeSet::new();
    for d in divisors(&constant) {
        for x in [Rational::from_bigint(d.clone()), Rational::from_bigint(-d)] {
            if product(&x) == target {
                out.insert(x);
            }
        }
    }
    out
}

/// Numerators N of the admissible values A_X = N/288.
pub fn admissible_a_numerators() -> Vec<i64> {
    std::iter::once(225).chain(240..=262).collect()
}

pub fn admissible_a_values() -> Vec<Rational> {
    admissible_a_numerators().into_iter().map(|n| Rational::new(n, 288)).collect()
}

pub fn guan_lower_bound() -> Rational {
    q(5, 6)
}

pub fn guan_upper_bound() -> Rational {
    q(131, 144)
}

/// Admissible A_X with 4A_X − t ∈ Z.
pub fn guan_gate(t: &Rational) -> Result<Vec<Rational>> {
    if t.is_negative() || *t >= q(1, 3) {
        return Err(Error::Precondition(format!("t = {t} outside [0, 1/3)")));
    }
    Ok(admissible_a_values()
        .into_iter()
        .filter(|a| (a * 4 - t).is_integer())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BettiViolation {
    OddB3,
    NonIntegral288A { value: Rational },
    B2OutsideGuanBranches,
    AOutsideGuanInterval { a_x: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    pub b2: i64,
    pub b3: i64,
    pub b4: i64,
    pub c4: i64,
    pub a_x: Rational,
    pub violations: Vec<BettiViolation>,
}

impl BettiProfile {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// c4 = 3(4 b2 + 16 − b3), b4 = c4 − 2 − 2 b2 + 2 b3, A_X = (7 − c4/432)/8.
pub fn betti_profile(b2: i64, b3: i64) -> Result<BettiProfile> {
    if b2 < 3 || b3 < 0 {
        return Err(Error::Precondition(format!("need b2 >= 3 and b3 >= 0, got ({b2}, {b3})")));
    }
    let c4 = 3 * (4 * b2 + 16 - b3);
    let b4 = c4 - 2 - 2 * b2 + 2 * b3;
    if b4 < 0 {
        return Err(Error::NegativeB4 { b2, b3, b4 });
    }
    let a_x = (Rational::integer(7) - Rational::new(c4, 432)) / 8;
    let mut violations = Vec::new();
    if b3 % 2 != 0 {
        violations.push(BettiViolation::OddB3);
    }
    let scaled = &a_x * 288;
    if !scaled.is_integer() {
        violations.push(BettiViolation::NonIntegral288A { value: scaled });
    }
    if b2 == 23 {
        if a_x != q(25, 32) {
            violations.push(BettiViolation::AOutsideGuanInterval { a_x: a_x.clone() });
        }
    } else if b2 <= 8 {
        if a_x < guan_lower_bound() || a_x > guan_upper_bound() {
            violations.push(BettiViolation::AOutsideGuanInterval { a_x: a_x.clone() });
        }
    } else {
        violations.push(BettiViolation::B2OutsideGuanBranches);
    }
    Ok(BettiProfile { b2, b3, b4, c4, a_x, violations })
}

/// One admissible (b2, b3) pair from a Betti data file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub b2: i64,
    pub b3: i64,
    pub source: String,
}

const BUNDLED_BETTI: &str = include_str!("../data/betti_guan.json");

pub fn bundled_betti_data() -> Vec<BettiEntry> {
    parse_betti_data(BUNDLED_BETTI).expect("bundled Betti data is valid")
}

pub fn parse_betti_data(json: &str) -> Result<Vec<BettiEntry>> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

/// (b2, b3) pairs permitted by the built-in relations alone for a given A_X:
/// b2 = 23 or 3 ≤ b2 ≤ 8, b3 ≥ 0, b4 ≥ 0, no violations.
pub fn builtin_betti_candidates(a_x: &Rational) -> Vec<BettiProfile> {
    let mut out = Vec::new();
    for b2 in (3..=8).chain(std::iter::once(23)) {
        // A_X fixes c4, hence b3 = 4 b2 + 16 − c4/3
        let c4 = (Rational::integer(7) - a_x * 8) * 432;
        let Some(c4) = c4.to_i64() else { continue };
        if c4 % 3 != 0 {
            continue;
        }
        let b3 = 4 * b2 + 16 - c4 / 3;
        if b3 < 0 {
            continue;
        }
        if let Ok(p) = betti_profile(b2, b3) {
            if p.is_clean() {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn degrees() {
        assert_eq!(fujiki_degree(2, &int(3), &int(2)), int(12));
        assert_eq!(fujiki_degree(2, &int(3), &int(0)), int(0));
        assert_eq!(fujiki_degree(5, &int(945), &int(2)), int(30240));
        assert_eq!(polarized_pairing_n(2, &int(3), &int(1)), int(2));
        assert_eq!(polarized_pairing_n(2, &int(9), &int(1)), int(6));
        assert_eq!(polarized_pairing_n(4, &int(7), &int(0)), int(0));
        assert_eq!(a_from_fujiki(2, &int(3), &int(1)), int(1));
        assert_eq!(a_from_fujiki(2, &int(9), &int(1)), int(3));
        assert_eq!(a_from_fujiki(5, &int(945), &int(1)), int(1));
    }

    #[test]
    fn four_class_pairing() {
        let u = QuadLattice::hyperbolic();
        let l = NSClass::new(vec![1, 0]);
        let m = NSClass::new(vec![0, 1]);
        assert_eq!(fujiki4_pairing(&int(3), &u, [&l, &l, &m, &m]), int(2));
        assert_eq!(fujiki4_pairing(&int(3), &u, [&l, &l, &l, &m]), int(0));
        let lpm = &l + &m;
        let e = &m - &l;
        assert_eq!(fujiki4_pairing(&int(3), &u, [&lpm, &lpm, &e, &l]), int(2));
    }

    #[test]
    fn rr_from_constants() {
        let p = rr_from_cx_ax(&int(3), &q(25, 32)).unwrap();
        let p = p.poly().unwrap();
        assert_eq!(p.base, RatPoly::new(vec![int(3), q(5, 4), q(1, 8)]));
        assert!(p.violations(Some(&int(3))).is_empty());
        let p = rr_from_cx_ax(&int(9), &q(27, 32)).unwrap();
        assert_eq!(p.poly().unwrap().base, RatPoly::new(vec![int(3), q(9, 4), q(3, 8)]));
        let p = rr_from_cx_ax(&int(3), &q(7, 8)).unwrap();
        assert_eq!(p, RrOutcome::Irrational { radicand: q(7, 4) });
    }

    #[test]
    fn lagrangian_forms() {
        let p = rr_lagrangian_form(2, 1, 1, 0).unwrap();
        assert_eq!(p.base, RatPoly::new(vec![int(3), q(5, 4), q(1, 8)]));
        assert!(p.violations(Some(&int(3))).is_empty());
        let p = rr_lagrangian_form(5, 1, 1, 0).unwrap();
        assert_eq!(p.implied_c_x(), int(945));
        assert!(p.violations(Some(&int(945))).is_empty());
        let p = rr_lagrangian_form(2, 0, 1, 0).unwrap();
        assert_eq!(p.base.coeff(0), int(1));
        assert!(p
            .violations(None)
            .iter()
            .any(|v| matches!(v, RrViolation::ConstantTerm { .. })));
    }

    #[test]
    fn constant_solutions() {
        let s = |n| rr_constant_solutions(n).into_iter().collect::<Vec<_>>();
        assert_eq!(s(2), vec![int(-4), int(1)]);
        assert_eq!(s(3), vec![int(1)]);
        assert_eq!(s(4), vec![int(-6), int(1)]);
        assert_eq!(s(1), vec![int(1)]);
    }

    #[test]
    fn betti() {
        let p = betti_profile(23, 0).unwrap();
        assert_eq!((p.c4, p.b4, p.a_x.clone()), (324, 276, q(25, 32)));
        assert!(p.is_clean());
        let p = betti_profile(7, 8).unwrap();
        assert_eq!((p.c4, p.b4, p.a_x.clone()), (108, 108, q(27, 32)));
        let p = betti_profile(5, 0).unwrap();
        assert_eq!((p.c4, p.b4, p.a_x.clone()), (108, 96, q(27, 32)));
        let p = betti_profile(7, 2).unwrap();
        assert!(p.violations.iter().any(|v| matches!(v, BettiViolation::NonIntegral288A { .. })));
        let p = betti_profile(7, 3).unwrap();
        assert!(p.violations.contains(&BettiViolation::OddB3));
        let p = betti_profile(12, 0).unwrap();
        assert!(p.violations.contains(&BettiViolation::B2OutsideGuanBranches));
        assert!(matches!(betti_profile(3, 200), Err(Error::NegativeB4 { .. })));
    }

    #[test]
    fn gate() {
        assert_eq!(guan_gate(&q(1, 8)).unwrap(), vec![q(25, 32)]);
        assert!(guan_gate(&int(0)).unwrap().is_empty());
        assert!(guan_gate(&q(1, 4)).unwrap().is_empty());
        assert!(guan_gate(&q(1, 3)).is_err());
    }

    #[test]
    fn builtin_candidates() {
        let pairs: Vec<(i64, i64)> =
            builtin_betti_candidates(&q(27, 32)).iter().map(|p| (p.b2, p.b3)).collect();
        assert_eq!(pairs, vec![(5, 0), (6, 4), (7, 8), (8, 12)]);
        let pairs: Vec<(i64, i64)> =
            builtin_betti_candidates(&q(25, 32)).iter().map(|p| (p.b2, p.b3)).collect();
        assert_eq!(pairs, vec![(23, 0)]);
    }

    #[test]
    fn bundled_data_loads() {
        let d = bundled_betti_data();
        assert_eq!(d.len(), 4);
        assert!(d.iter().all(|e| betti_profile(e.b2, e.b3).unwrap().is_clean()));
    }
}
