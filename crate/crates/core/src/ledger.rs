//! Euler characteristics and section counts driven by the RR polynomial,
//! plus the plane Bott numbers, the Segre rank certificate and the Mukai
//! vector arithmetic on the degree-2 K3 surface.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binom, binom_int, RatPoly, Rational};
use crate::fujiki::{fujiki4_pairing, rr_lagrangian_form, RRPolynomial};
use crate::lattice::{NSClass, QuadLattice};

/// binom(T/2 + 3, 2), the RR polynomial of K3^[2] type.
pub fn k3n2_rr() -> RRPolynomial {
    rr_lagrangian_form(2, 1, 1, 0).expect("valid parameters")
}

/// χ(X, L^p ⊗ M^q) = P_RR(q(p l + q m)) = P_RR(2pq).
pub fn chi(p: i64, q: i64) -> Rational {
    k3n2_rr().eval_int(2 * p * q)
}

/// Justification for reading χ as h⁰.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingSource {
    Kodaira,
    KawamataViehweg,
    Pushforward,
    EulerOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub p: i64,
    pub q: i64,
    pub bbf_value: i64,
    pub chi: Rational,
    pub vanishing: VanishingSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCountLedger {
    pub entries: Vec<LedgerEntry>,
    pub k_l: i64,
}

impl SectionCountLedger {
    pub fn get(&self, p: i64, q: i64) -> Option<&Rational> {
        self.entries.iter().find(|e| e.p == p && e.q == q).map(|e| &e.chi)
    }
}

pub fn chi_table() -> SectionCountLedger {
    use VanishingSource::*;
    let rows = [
        (1, 0, Pushforward),
        (0, 1, Pushforward),
        (1, 1, Kodaira),
        (2, 1, Kodaira),
        (1, 2, Kodaira),
        (3, 2, Kodaira),
        (2, 2, KawamataViehweg),
        (3, 1, KawamataViehweg),
        (1, -1, EulerOnly),
        (2, -1, EulerOnly),
        (0, -1, EulerOnly),
        (1, -2, EulerOnly),
    ];
    let entries = rows
        .into_iter()
        .map(|(p, q, vanishing)| LedgerEntry { p, q, bbf_value: 2 * p * q, chi: chi(p, q), vanishing })
        .collect();
    SectionCountLedger { entries, k_l: 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCounts {
    pub h0_l_plus_h0_m: i64,
    pub ideal_lm: i64,
    pub ideal_2l2m: i64,
    pub h0_2l2m: i64,
    pub restricted_2l2m: i64,
    pub restriction_rank: i64,
    pub quadrics_lower_bound: i64,
    pub castelnuovo_max: i64,
    pub contradiction: bool,
}

fn chi_int(p: i64, q: i64) -> i64 {
    chi(p, q).to_i64().expect("integral Euler characteristic")
}

/// Koszul bookkeeping for Σ = D_σ ∩ D_τ, with h⁰(L) + h⁰(M) as the branch input.
pub fn koszul_counts(h0_l_plus_h0_m: i64) -> KoszulCounts {
    let ideal_lm = h0_l_plus_h0_m - 1;
    let ideal_2l2m = chi_int(2, 1) + chi_int(1, 2) - chi_int(1, 1);
    let h0_2l2m = chi_int(2, 2);
    let restricted_2l2m = h0_2l2m - ideal_2l2m;
    let restriction_rank = chi_int(1, 1) - ideal_lm;
    // quadrics on P^{rank−1} minus those surviving on the surface
    let quadrics_lower_bound = binom_int(restriction_rank + 1, 2) - restricted_2l2m;
    // a nondegenerate surface in P^4 has codimension 2
    let codim = restriction_rank - 1 - 2;
    let castelnuovo_max = binom_int(codim + 1, 2);
    KoszulCounts {
        h0_l_plus_h0_m,
        ideal_lm,
        ideal_2l2m,
        h0_2l2m,
        restricted_2l2m,
        restriction_rank,
        quadrics_lower_bound,
        castelnuovo_max,
        contradiction: quadrics_lower_bound > castelnuovo_max,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreSystem {
    pub matrix: [[i64; 4]; 4],
    pub determinant: i64,
    pub rank: usize,
}

/// Row i (i = 8..11): coefficient (−1)^{i−k} binom(i+2, i−k) on H^{11−k} s_k.
pub fn segre_rows() -> [[i64; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for (r, i) in (8..12).enumerate() {
        for (k, entry) in m[r].iter_mut().enumerate() {
            let j = i - k as i64;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            *entry = sign * binom_int(i + 2, j);
        }
    }
    m
}

/// Same rows from the series (1 + H)^{−(k+3)}: the coefficient of H^j s_k
/// in s(E ⊗ H) for a rank-3 bundle E.
pub fn segre_rows_by_series() -> [[i64; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for k in 0..4usize {
        let series = inverse_power_series(k as u32 + 3, 12);
        for (r, i) in (8..12usize).enumerate() {
            m[r][k] = series[i - k].to_i64().expect("integral series coefficient");
        }
    }
    m
}

/// Coefficients of (1 + H)^{−e} up to H^{len−1}, by inverting the truncated
/// polynomial (1 + H)^e term by term.
fn inverse_power_series(e: u32, len: usize) -> Vec<Rational> {
    let base = (0..e).fold(RatPoly::constant(Rational::one()), |acc, _| {
        &acc * &RatPoly::from_ints(&[1, 1])
    });
    let mut inv = vec![Rational::zero(); len];
    inv[0] = base.coeff(0).recip();
    for n in 1..len {
        let s: Rational = (1..=n).map(|i| base.coeff(i) * &inv[n - i]).sum();
        inv[n] = -s / base.coeff(0);
    }
    inv
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Fraction-free (Bareiss) elimination; returns (determinant, rank).
pub fn det_bareiss(m: &[Vec<BigInt>]) -> (BigInt, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut prev = BigInt::from(1);
    let mut sign = 1i32;
    let mut rank = 0;
    let mut det_zero = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            det_zero = true;
            continue;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        rank += 1;
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if det_zero {
        return (BigInt::zero(), rank);
    }
    let d = &a[n - 1][n - 1] * sign;
    (d, rank)
}

pub fn segre_certificate() -> SegreSystem {
    let matrix = segre_rows();
    let big: Vec<Vec<BigInt>> = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let (det, rank) = det_bareiss(&big);
    SegreSystem {
        matrix,
        determinant: det.to_string().parse().expect("determinant fits in i64"),
        rank,
    }
}

/// True when `start + 2·steps > cap`, i.e. not every step of the chain can
/// increase the dimension by 2 or more.
pub fn hopf_chain_bound(start: i64, steps: i64, cap: i64) -> bool {
    assert!(start >= 1 && steps >= 1);
    start + 2 * steps > cap
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlGate {
    Admissible,
    ConicContradiction,
    Excluded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBound {
    pub h0: i64,
    pub k: i64,
    pub bound: i64,
    pub target: i64,
    pub gate: KlGate,
}

/// σ^k, σ^{k−1}τ, …, τ^k are independent, so h⁰(L^k) ≥ k + 1; compared
/// against h⁰(P², O(1)) = 3.
pub fn monomial_section_bound(h0: i64, k: i64) -> MonomialBound {
    assert!(h0 >= 2 && k >= 1);
    let bound = k + 1;
    let target = bott_p2(0, 1).expect("valid").0;
    let gate = if bound > target {
        KlGate::Excluded
    } else if bound == target && k == 2 {
        KlGate::ConicContradiction
    } else {
        KlGate::Admissible
    };
    MonomialBound { h0, k, bound, target, gate }
}

fn h_line_bundle(d: i64) -> (i64, i64, i64) {
    let h0 = if d >= 0 { binom_int(d + 2, 2) } else { 0 };
    let h2 = if d <= -3 { binom_int(-d - 1, 2) } else { 0 };
    (h0, 0, h2)
}

/// (h⁰, h¹, h²) of Ω^q(d) on P².
pub fn bott_p2(q: i64, d: i64) -> Result<(i64, i64, i64)> {
    match q {
        0 => Ok(h_line_bundle(d)),
        2 => Ok(h_line_bundle(d - 3)),
        1 => {
            // 0 → Ω¹(d) → O(d−1)³ → O(d) → 0
            let (a0, _, a2) = h_line_bundle(d - 1);
            let (b0, _, b2) = h_line_bundle(d);
            let coker = i64::from(d == 0);
            Ok((3 * a0 - b0 + coker, coker, 3 * a2 - b2))
        }
        _ => Err(Error::Precondition(format!("form degree {q} outside 0..=2"))),
    }
}

/// Mukai vector (r, c·H, s) on a K3 surface with Picard group Z·H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiVector {
    pub rank: i64,
    pub c1_coeff: i64,
    pub s: i64,
    pub polarization_degree: i64,
}

impl MukaiVector {
    pub fn pairing(&self, other: &MukaiVector) -> i64 {
        assert_eq!(self.polarization_degree, other.polarization_degree);
        self.polarization_degree * self.c1_coeff * other.c1_coeff
            - self.rank * other.s
            - other.rank * self.s
    }

    pub fn is_spherical(&self) -> bool {
        self.pairing(self) == -2
    }

    /// χ(F) = −⟨v(O), v(F)⟩.
    pub fn chi(&self) -> Rational {
        let o = MukaiVector { rank: 1, c1_coeff: 0, s: 1, polarization_degree: self.polarization_degree };
        Rational::integer(-o.pairing(self))
    }

    /// v(F ⊗ H^k) = v(F) · (1, kH, k²H²/2).
    pub fn twist(&self, k: i64) -> Rational {
        // only the χ of the twist is needed; H²/2 may be fractional in general
        let h2 = Rational::integer(self.polarization_degree);
        let s = Rational::integer(self.s)
            + Rational::integer(k * self.c1_coeff) * &h2
            + Rational::integer(self.rank * k * k) * &h2 / 2;
        s + self.rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiSolution {
    pub vector: MukaiVector,
    pub chi_e: Rational,
    pub chi_e_twisted: Rational,
    pub self_pairing: i64,
}

/// χ inputs for the Mukai solve: χ(L), χ(L(−E)), χ(M⁻¹), χ(L ⊗ M⁻²).
pub fn mukai_inputs_from_table() -> [Rational; 4] {
    [chi(1, 0), chi(2, -1), chi(0, -1), chi(1, -2)]
}

/// Solves v(E) = (2, sH, s′) on the degree-2 K3 surface from
/// s′ + 2 = χ(L) − χ(L(−E)) and s′ − 2s + 4 = χ(M⁻¹) − χ(L ⊗ M⁻²).
pub fn mukai_solve_with(inputs: &[Rational; 4]) -> Result<MukaiSolution> {
    let rank = 2;
    let h2 = 2;
    let chi_e = &inputs[0] - &inputs[1];
    let chi_e_twisted = &inputs[2] - &inputs[3];
    let s_prime = (&chi_e - rank)
        .to_i64()
        .ok_or_else(|| Error::InconsistentChi(format!("chi(E) = {chi_e}")))?;
    // χ(E ⊗ H⁻¹) = r + s′ − s H² + r H²/2
    let numer = Rational::integer(rank + s_prime + rank * h2 / 2) - &chi_e_twisted;
    let s = (numer / h2)
        .to_i64()
        .ok_or_else(|| Error::InconsistentChi(format!("chi(E(-H)) = {chi_e_twisted}")))?;
    let vector = MukaiVector { rank, c1_coeff: s, s: s_prime, polarization_degree: h2 };
    if vector.chi() != chi_e || vector.twist(-1) != chi_e_twisted {
        return Err(Error::InconsistentChi("solution does not reproduce inputs".into()));
    }
    let self_pairing = vector.pairing(&vector);
    Ok(MukaiSolution { vector, chi_e, chi_e_twisted, self_pairing })
}

pub fn mukai_solve() -> Result<MukaiSolution> {
    mukai_solve_with(&mukai_inputs_from_table())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3Checks {
    pub chi_o_minus_e: Rational,
    pub chi_o_e: Rational,
    pub h_squared: Rational,
    pub h_sigma_squared: i64,
    pub degree_two_k3: bool,
}

pub fn k3_exceptional_checks() -> K3Checks {
    let u = QuadLattice::hyperbolic();
    let l = NSClass::new(vec![1, 0]);
    let m = NSClass::new(vec![0, 1]);
    let e = &m - &l;
    let lpm = &l + &m;
    let p = k3n2_rr();
    // O(−E) has class l − m
    let chi_o_minus_e = p.eval_int(u.q(&(&l - &m)));
    let chi_o = p.eval_int(0);
    let chi_o_e = &chi_o - &chi_o_minus_e;
    let h_squared = fujiki4_pairing(&Rational::integer(3), &u, [&lpm, &lpm, &e, &l]);
    let h_sigma_squared = mukai_solve().map(|s| s.vector.polarization_degree).unwrap_or(0);
    let degree_two_k3 = chi_o_e == Rational::integer(2) && h_squared == Rational::integer(2);
    K3Checks { chi_o_minus_e, chi_o_e, h_squared, h_sigma_squared, degree_two_k3 }
}

/// χ grid over |p|, |q| ≤ r keyed by (p, q).
pub fn chi_grid(r: i64) -> BTreeMap<(i64, i64), Rational> {
    let mut out = BTreeMap::new();
    for p in -r..=r {
        for q in -r..=r {
            out.insert((p, q), chi(p, q));
        }
    }
    out
}

/// binom(pq + 3, 2), the closed form of the table.
pub fn chi_closed_form(p: i64, q: i64) -> Rational {
    binom(&Rational::integer(p * q + 3), 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn table_values() {
        let t = chi_table();
        let expect = [
            ((1, 1), 6),
            ((2, 1), 10),
            ((3, 2), 36),
            ((2, 2), 21),
            ((3, 1), 15),
            ((1, -1), 1),
            ((2, -1), 0),
            ((0, 1), 3),
            ((0, -1), 3),
            ((1, -2), 0),
        ];
        for ((p, q), v) in expect {
            assert_eq!(t.get(p, q), Some(&int(v)), "chi({p},{q})");
        }
        assert_eq!(t.k_l, 1);
    }

    #[test]
    fn koszul() {
        let k = koszul_counts(2);
        assert_eq!((k.ideal_2l2m, k.h0_2l2m, k.restricted_2l2m), (14, 21, 7));
        assert_eq!(k.restriction_rank, 5);
        assert_eq!((k.quadrics_lower_bound, k.castelnuovo_max), (8, 3));
        assert!(k.contradiction);
    }

    #[test]
    fn segre() {
        let s = segre_certificate();
        assert_eq!(s.matrix[0], [45, -120, 210, -252]);
        assert_eq!(s.matrix[3], [-78, 286, -715, 1287]);
        assert_eq!(segre_rows(), segre_rows_by_series());
        assert_eq!(s.rank, 4);
        assert_eq!(s.determinant, 70785);
        let big: Vec<Vec<BigInt>> = s.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(det_cofactor(&big), BigInt::from(s.determinant));
    }

    #[test]
    fn bareiss_singular() {
        let m: Vec<Vec<BigInt>> = [[1, 2], [2, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_bareiss(&m), (BigInt::zero(), 1));
    }

    #[test]
    fn hopf_and_monomials() {
        assert!(hopf_chain_bound(3, 3, 8));
        assert!(!hopf_chain_bound(3, 3, 9));
        assert!(hopf_chain_bound(3, 1, 4));
        assert_eq!(monomial_section_bound(2, 2).gate, KlGate::ConicContradiction);
        assert_eq!(monomial_section_bound(2, 3).gate, KlGate::Excluded);
        assert_eq!(monomial_section_bound(2, 1).gate, KlGate::Admissible);
    }

    #[test]
    fn bott() {
        assert_eq!(bott_p2(0, 1).unwrap(), (3, 0, 0));
        assert_eq!(bott_p2(1, 1).unwrap(), (0, 0, 0));
        assert_eq!(bott_p2(2, 1).unwrap(), (0, 0, 0));
        assert_eq!(bott_p2(1, 0).unwrap(), (0, 1, 0));
        assert_eq!(bott_p2(1, 2).unwrap(), (3, 0, 0));
        assert!(bott_p2(3, 0).is_err());
    }

    #[test]
    fn mukai() {
        let s = mukai_solve().unwrap();
        assert_eq!((s.vector.rank, s.vector.c1_coeff, s.vector.s), (2, 1, 1));
        assert_eq!(s.self_pairing, -2);
        assert!(s.vector.is_spherical());
        assert!(mukai_solve_with(&[int(3), int(0), int(4), int(0)]).is_err());
    }

    #[test]
    fn k3() {
        let k = k3_exceptional_checks();
        assert_eq!((k.chi_o_minus_e.clone(), k.chi_o_e.clone(), k.h_squared.clone()), (int(1), int(2), int(2)));
        assert_eq!(k.h_sigma_squared, 2);
        assert!(k.degree_two_k3);
    }
}
