//! UNSAT certificates built on the degree-4 Hodge classes: the Lagrangian
//! plane, contracted surfaces and the Σ-splitting.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::mpoly::{resultant, MPoly};
use super::{boundary_value, h4_pair, intersection_matrix, BoundaryWitness, H4Class, IntersectionMatrix};
use crate::exact::{RatPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "UNSAT")]
    Unsat,
    #[serde(rename = "SAT")]
    Sat,
}

/// Uniform JSON shape shared by every certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub name: String,
    pub status: Status,
    pub deduction: Vec<String>,
    pub witnesses: Vec<Value>,
}

/// The three equations in (t, u, x), x = q(A), for [P²] = t A² + u q∨.
pub struct PlaneSystem {
    pub self_square: MPoly,
    pub c2_degree: MPoly,
    pub a_square: MPoly,
}

const T: usize = 0;
const U: usize = 1;
const X: usize = 2;

impl PlaneSystem {
    pub fn new() -> Self {
        // [P²]² = 3: 3t²x² + 50tux + 575u² − 3
        let self_square = MPoly::from_terms(
            3,
            &[(3, &[2, 0, 2]), (50, &[1, 1, 1]), (575, &[0, 2, 0]), (-3, &[0, 0, 0])],
        );
        // c₂·[P²] = −3 with c₂ = (6/5) q∨: 30tx + 690u + 3
        let c2_degree =
            MPoly::from_terms(3, &[(30, &[1, 0, 1]), (690, &[0, 1, 0]), (3, &[0, 0, 0])]);
        // A²·[P²] = q(A)²: 3tx² + 25ux − x²
        let a_square =
            MPoly::from_terms(3, &[(3, &[1, 0, 2]), (25, &[0, 1, 1]), (-1, &[0, 0, 2])]);
        PlaneSystem { self_square, c2_degree, a_square }
    }

    /// Residuals of the three equations at (t, u, x).
    pub fn residuals(&self, t: &Rational, u: &Rational, x: &Rational) -> [Rational; 3] {
        let p = [t.clone(), u.clone(), x.clone()];
        [self.self_square.eval(&p), self.c2_degree.eval(&p), self.a_square.eval(&p)]
    }
}

impl Default for PlaneSystem {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackSubstitution {
    pub x: Rational,
    pub t: Rational,
    pub u: Rational,
    pub residuals: [Rational; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCertificate {
    /// Quadratic in x from linear elimination of s = t x and u.
    pub eliminated: RatPoly,
    /// Primitive part of the iterated resultant with powers of x removed.
    pub resultant: RatPoly,
    pub stripped_x_power: usize,
    pub resultant_agrees: bool,
    pub discriminant: Rational,
    pub roots: Vec<Rational>,
    pub integer_candidates: Vec<Rational>,
    pub integer_roots: Vec<Rational>,
    pub x_zero_branch: [Rational; 3],
    pub back_substitution: Vec<BackSubstitution>,
    pub status: Status,
}

/// With s = t x, the second and third equations are linear in (s, u) once
/// x ≠ 0: 30 s + 690 u = −3 and 3 s + 25 u = x. Substituting into the first
/// leaves a quadratic in x.
fn eliminate_linear() -> (RatPoly, RatPoly, RatPoly) {
    let x = RatPoly::var();
    // 440 u = −3 − 10 x
    let u = RatPoly::linear(Rational::new(-10, 440), Rational::new(-3, 440));
    // s = (x − 25 u) / 3
    let s = (&x - &u.scale(&Rational::integer(25))).scale(&Rational::new(1, 3));
    let three = |p: &RatPoly, k: i64| p.scale(&Rational::integer(k));
    let quad = &(&three(&(&s * &s), 3) + &three(&(&s * &u), 50)) + &three(&(&u * &u), 575);
    let eq = &quad - &RatPoly::constant(Rational::integer(3));
    (eq, s, u)
}

pub fn lagrangian_plane_certificate() -> PlaneCertificate {
    let sys = PlaneSystem::new();
    let (raw, s_of_x, u_of_x) = eliminate_linear();
    let eliminated = raw.primitive();

    let r1 = resultant(&sys.c2_degree, &sys.a_square, T);
    let r2 = resultant(&sys.self_square, &sys.c2_degree, T);
    let r = resultant(&r1, &r2, U)
        .to_univariate(X)
        .expect("resultant depends on x only");
    let (stripped_x_power, core) = r.strip_var_powers();
    let resultant_poly = core.primitive();
    let resultant_agrees = resultant_poly == eliminated;

    let a = eliminated.coeff(2);
    let b = eliminated.coeff(1);
    let c = eliminated.coeff(0);
    let discriminant = &b * &b - Rational::integer(4) * &a * &c;
    let roots = eliminated.rational_roots();
    let integer_candidates: Vec<Rational> = eliminated
        .rational_root_candidates()
        .into_iter()
        .filter(Rational::is_integer)
        .collect();
    let integer_roots: Vec<Rational> = roots.iter().filter(|r| r.is_integer()).cloned().collect();

    let zero = Rational::zero();
    // x = 0 forces s = 0 and u = −1/230, which violates the first equation
    let u0 = Rational::new(-1, 230);
    let x_zero_branch = sys.residuals(&zero, &u0, &zero);

    let back_substitution = roots
        .iter()
        .map(|x| {
            let u = u_of_x.eval(x);
            let t = s_of_x.eval(x) / x;
            let residuals = sys.residuals(&t, &u, x);
            BackSubstitution { x: x.clone(), t, u, residuals }
        })
        .collect();

    let status = if integer_roots.is_empty() && !x_zero_branch[0].is_zero() {
        Status::Unsat
    } else {
        Status::Sat
    };
    PlaneCertificate {
        eliminated,
        resultant: resultant_poly,
        stripped_x_power,
        resultant_agrees,
        discriminant,
        roots,
        integer_candidates,
        integer_roots,
        x_zero_branch,
        back_substitution,
        status,
    }
}

impl PlaneCertificate {
    pub fn report(&self) -> CertificateReport {
        let deduction = vec![
            "[P2] = t A^2 + u q: [P2]^2 = 3t^2x^2 + 50tux + 575u^2 = 3".into(),
            "c2.[P2] = (6/5)(25tx + 575u) = 30tx + 690u = -3".into(),
            "A^2.[P2] = 3tx^2 + 25ux = x^2".into(),
            format!("x = 0 branch: first residual {} != 0", self.x_zero_branch[0]),
            format!("eliminated: {} = 0", self.eliminated),
            format!(
                "resultant cross-check: {} (x^{} stripped), agrees = {}",
                self.resultant, self.stripped_x_power, self.resultant_agrees
            ),
            format!("discriminant {}", self.discriminant),
            format!(
                "rational roots {}",
                self.roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
            ),
            format!(
                "{} integer candidates tested, integer roots: none = {}",
                self.integer_candidates.len(),
                self.integer_roots.is_empty()
            ),
        ];
        CertificateReport {
            name: "nefcone-plane".into(),
            status: self.status,
            deduction,
            witnesses: self.back_substitution.iter().map(|b| json!(b)).collect(),
        }
    }
}

/// Denominators d with d² | k, i.e. the possible denominators of w when
/// k w² must be an integer.
pub fn square_denominators(k: u64) -> Vec<u64> {
    (1..=k.isqrt()).filter(|d| k.is_multiple_of(d * d)).collect()
}

/// Samples a quantity that is polynomial of degree ≤ 2 in w and recovers it.
fn quadratic_in_w(f: impl Fn(&Rational) -> Rational) -> RatPoly {
    let pts: Vec<_> = (0..3)
        .map(|k| {
            let w = Rational::integer(k);
            let y = f(&w);
            (w, y)
        })
        .collect();
    RatPoly::interpolate(&pts)
}

/// q∨ − (25/2) lm, orthogonal to Sym² of NS.
pub fn primitive_qdual() -> H4Class {
    &H4Class::qdual() - &H4Class::lm().scale(&Rational::new(25, 2))
}

/// (t/2)(l² − lm + m²) + w(q∨ − (25/2) lm).
pub fn surface_class(t: i64, w: &Rational) -> H4Class {
    let base = H4Class::new(
        Rational::new(t, 2),
        Rational::new(-t, 2),
        Rational::new(t, 2),
        Rational::zero(),
    );
    &base + &primitive_qdual().scale(w)
}

/// 2(l + m)(−l + m) − [S].
pub fn residual_surface_class(t: i64, w: &Rational) -> H4Class {
    &H4Class::product((1, 1), (-1, 1)).scale(&Rational::integer(2)) - &surface_class(t, w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCase {
    pub t: i64,
    pub twice_square: RatPoly,
    pub denominators: Vec<u64>,
    pub m_s: IntersectionMatrix,
    pub m_s_prime: IntersectionMatrix,
    pub boundary_s: RatPoly,
    pub boundary_s_prime: RatPoly,
    pub forced_w: Option<Rational>,
    pub five_w_integral: bool,
    pub square_even_at_forced_w: bool,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCertificate {
    pub witness: BoundaryWitness,
    pub witness_q_l: Rational,
    pub witness_q_e: Rational,
    pub cases: Vec<SurfaceCase>,
    pub probe: SurfaceCase,
    pub status: Status,
}

/// The pair of effective classes forces a single w via the witness; returns it.
fn pinned_point(p: &RatPoly, q: &RatPoly) -> Option<Rational> {
    // p(w) ≥ 0 and q(w) ≥ 0 with q = −p and p of degree 1
    if p.degree() != Some(1) || (p + q) != RatPoly::zero() {
        return None;
    }
    Some(-p.coeff(0) / p.coeff(1))
}

pub fn surface_case(t: i64) -> SurfaceCase {
    let omega = BoundaryWitness::standard();
    let twice_square = quadratic_in_w(|w| {
        let s = surface_class(t, w);
        h4_pair(&s, &s) * 2
    });
    let k = twice_square.coeff(2);
    let denominators = k
        .to_i64()
        .filter(|k| *k > 0)
        .map(|k| square_denominators(k as u64))
        .unwrap_or_default();
    let zero = Rational::zero();
    let boundary_s = quadratic_in_w(|w| boundary_value(&surface_class(t, w), &omega).unwrap());
    let boundary_s_prime =
        quadratic_in_w(|w| boundary_value(&residual_surface_class(t, w), &omega).unwrap());
    let forced_w = pinned_point(&boundary_s, &boundary_s_prime);
    let max_den = denominators.iter().copied().max().unwrap_or(1) as i64;
    let five_w_integral = forced_w
        .as_ref()
        .is_some_and(|w| (w * max_den).is_integer());
    let square_even_at_forced_w = forced_w.as_ref().is_some_and(|w| {
        twice_square.eval(w).to_integer().is_some_and(|v| !v.bit(0))
    });
    let status = if five_w_integral && square_even_at_forced_w {
        Status::Sat
    } else {
        Status::Unsat
    };
    SurfaceCase {
        t,
        twice_square,
        denominators,
        m_s: intersection_matrix(&surface_class(t, &zero)),
        m_s_prime: intersection_matrix(&residual_surface_class(t, &zero)),
        boundary_s,
        boundary_s_prime,
        forced_w,
        five_w_integral,
        square_even_at_forced_w,
        status,
    }
}

pub fn contracted_surface_certificate() -> SurfaceCertificate {
    let witness = BoundaryWitness::standard();
    let cases: Vec<SurfaceCase> = (1..=4).map(surface_case).collect();
    let status = if cases.iter().all(|c| c.status == Status::Unsat) {
        Status::Unsat
    } else {
        Status::Sat
    };
    SurfaceCertificate {
        witness_q_l: witness.pair_ns(1, 0),
        witness_q_e: witness.pair_ns(-1, 1),
        witness,
        cases,
        probe: surface_case(5),
        status,
    }
}

impl SurfaceCertificate {
    pub fn report(&self) -> CertificateReport {
        let mut deduction = vec![
            "[S] = (t/2)(l^2 - lm + m^2) + w(q - (25/2)lm), [S'] = 2(l+m)(-l+m) - [S]".into(),
            format!(
                "witness l + m + e' - f': q = 0, q(w,l) = {}, q(w,-l+m) = {}",
                self.witness_q_l, self.witness_q_e
            ),
        ];
        for c in self.cases.iter().chain(std::iter::once(&self.probe)) {
            let w = c.forced_w.as_ref().map_or("none".to_string(), |w| w.to_string());
            deduction.push(format!(
                "t = {}: 2[S]^2 = {}, denominators of w in {:?}; int [S]w^2 = {}, int [S']w^2 = {}; 25w = t gives w = {}, 5w integral = {}: {:?}",
                c.t, c.twice_square, c.denominators, c.boundary_s, c.boundary_s_prime, w,
                c.five_w_integral, c.status
            ));
        }
        CertificateReport {
            name: "contract-surface".into(),
            status: self.status,
            deduction,
            witnesses: vec![json!(self.witness), json!(self.probe)],
        }
    }
}

/// (1/2) lm + sign · w (q∨ − (25/2) lm).
pub fn sigma_class(sign: i64, w: &Rational) -> H4Class {
    &H4Class::lm().scale(&Rational::new(1, 2)) + &primitive_qdual().scale(&(w * sign))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaScanEntry {
    pub w: Rational,
    pub integral: bool,
    pub witness_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaCertificate {
    pub witness: BoundaryWitness,
    pub sigma1_square: RatPoly,
    pub sigma2_square: RatPoly,
    pub sigma_product: RatPoly,
    pub w_zero_square: Rational,
    pub denominators: Vec<u64>,
    pub w_lower_bound: Rational,
    pub boundary_sigma1: RatPoly,
    pub boundary_sigma2: RatPoly,
    pub w_upper_bound: Rational,
    pub square_at_lower_bound: Rational,
    pub scan_window: i64,
    pub scan: Vec<SigmaScanEntry>,
    pub survivors: Vec<Rational>,
    pub status: Status,
}

pub const SIGMA_SCAN_WINDOW: i64 = 10;

pub fn sigma_split_certificate() -> SigmaCertificate {
    let omega = BoundaryWitness::standard();
    let sq1 = quadratic_in_w(|w| {
        let s = sigma_class(1, w);
        h4_pair(&s, &s)
    });
    let sq2 = quadratic_in_w(|w| {
        let s = sigma_class(-1, w);
        h4_pair(&s, &s)
    });
    let prod = quadratic_in_w(|w| h4_pair(&sigma_class(1, w), &sigma_class(-1, w)));
    let w_zero_square = sq1.eval(&Rational::zero());
    // Σ² − 1/2 = k w² / 2 with k = 525; an integral value needs k w² ∈ Z
    let k = (sq1.coeff(2) * 2).to_i64().expect("integral w^2 coefficient");
    let denominators = square_denominators(k as u64);
    let max_den = *denominators.iter().max().expect("1 divides everything") as i64;
    let w_lower_bound = Rational::new(1, max_den);
    let b1 = quadratic_in_w(|w| boundary_value(&sigma_class(1, w), &omega).unwrap());
    let b2 = quadratic_in_w(|w| boundary_value(&sigma_class(-1, w), &omega).unwrap());
    // b1(w) = 1 − 25w ≥ 0
    let w_upper_bound = -b1.coeff(0) / b1.coeff(1);
    let square_at_lower_bound = sq1.eval(&w_lower_bound);

    let integral = |w: &Rational| {
        sq1.eval(w).is_integer() && sq2.eval(w).is_integer() && prod.eval(w).is_integer()
    };
    let witness_ok = |w: &Rational| !b1.eval(w).is_negative() && !b2.eval(w).is_negative();
    let mut scan = Vec::new();
    for d in &denominators {
        for n in -SIGMA_SCAN_WINDOW * *d as i64..=SIGMA_SCAN_WINDOW * *d as i64 {
            let w = Rational::new(n, *d as i64);
            if w.denom() != &num_bigint::BigInt::from(*d) {
                continue;
            }
            scan.push(SigmaScanEntry { integral: integral(&w), witness_ok: witness_ok(&w), w });
        }
    }
    let survivors: Vec<Rational> = scan
        .iter()
        .filter(|e| e.integral && e.witness_ok)
        .map(|e| e.w.clone())
        .collect();
    let status = if survivors.is_empty() && w_lower_bound > w_upper_bound && !w_zero_square.is_integer() {
        Status::Unsat
    } else {
        Status::Sat
    };
    SigmaCertificate {
        witness: omega,
        sigma1_square: sq1,
        sigma2_square: sq2,
        sigma_product: prod,
        w_zero_square,
        denominators,
        w_lower_bound,
        boundary_sigma1: b1,
        boundary_sigma2: b2,
        w_upper_bound,
        square_at_lower_bound,
        scan_window: SIGMA_SCAN_WINDOW,
        scan,
        survivors,
        status,
    }
}

impl SigmaCertificate {
    pub fn report(&self) -> CertificateReport {
        let deduction = vec![
            "Sigma_1 = (1/2)lm + w(q - (25/2)lm), Sigma_2 = (1/2)lm - w(q - (25/2)lm), w >= 0 after swapping".into(),
            format!(
                "integrality: Sigma_i^2 = {}, Sigma_1 Sigma_2 = {}",
                self.sigma1_square, self.sigma_product
            ),
            format!("integrality kills w = 0: Sigma^2 = {}", self.w_zero_square),
            format!(
                "integrality: denominator of w in {:?}, so w >= {}",
                self.denominators, self.w_lower_bound
            ),
            format!(
                "witness: int Sigma_1 w^2 = {} >= 0, so w <= {}",
                self.boundary_sigma1, self.w_upper_bound
            ),
            format!(
                "contradiction: {} > {}; scan of {} values leaves {} survivors",
                self.w_lower_bound,
                self.w_upper_bound,
                self.scan.len(),
                self.survivors.len()
            ),
        ];
        CertificateReport {
            name: "sigma-split".into(),
            status: self.status,
            deduction,
            witnesses: vec![json!(self.witness)],
        }
    }
}
