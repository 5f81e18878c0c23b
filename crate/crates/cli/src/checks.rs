//! The named certificate checks behind `hk4 verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use hk4_core::classifier::star_lemma;
use hk4_core::exact::{q, BigInt};
use hk4_core::fujiki::{guan_gate, rr_lagrangian_form};
use hk4_core::h4::certificates::{
    contracted_surface_certificate, lagrangian_plane_certificate, sigma_split_certificate,
    Status, SurfaceCase,
};
use hk4_core::lattice::{cone_report, prime_exceptional_candidates, reflection_about};
use hk4_core::ledger::{
    bott_p2, chi_table, det_cofactor, hopf_chain_bound, k3_exceptional_checks, k3n2_rr,
    koszul_counts, monomial_section_bound, mukai_inputs_from_table, mukai_solve,
    segre_certificate, segre_rows_by_series,
};
use hk4_core::{NSClass, QuadLattice, RRPolynomial, RatPoly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }
        }

        impl FromStr for CheckId {
            type Err = CliError;
            fn from_str(s: &str) -> Result<Self, CliError> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(CliError::Usage(format!(
                        "unknown certificate id `{s}`; expected one of: {}",
                        [$($name),*].join(", ")
                    ))),
                }
            }
        }
    };
}

check_ids! {
    GuanGate => "guan-gate",
    Star => "star",
    NefconePlane => "nefcone-plane",
    ContractSurface => "contract-surface",
    SigmaSplit => "sigma-split",
    Segre => "segre",
    Koszul => "koszul",
    Castelnuovo => "castelnuovo",
    Mukai => "mukai",
    K3Checks => "k3-checks",
    Cones => "cones",
    Reflection => "reflection",
    Bott => "bott",
    ChiTable => "chi-table",
    Bounds => "bounds",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolves `all` or a single id.
pub fn parse_selection(s: &str) -> Result<Vec<CheckId>, CliError> {
    if s == "all" {
        Ok(CheckId::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

/// Exact values produced by one check, plus the certificate verdict if any.
pub struct Computed {
    pub values: Value,
    pub verdict: Option<Status>,
}

pub fn compute(id: CheckId) -> Result<Computed, CliError> {
    let (values, verdict) = match id {
        CheckId::GuanGate => (guan(), None),
        CheckId::Star => (star(), None),
        CheckId::NefconePlane => plane(),
        CheckId::ContractSurface => surface(),
        CheckId::SigmaSplit => sigma(),
        CheckId::Segre => (segre(), None),
        CheckId::Koszul => (koszul(), None),
        CheckId::Castelnuovo => (castelnuovo(), None),
        CheckId::Mukai => (mukai()?, None),
        CheckId::K3Checks => (json!(k3_exceptional_checks()), None),
        CheckId::Cones => (cones()?, None),
        CheckId::Reflection => (reflection()?, None),
        CheckId::Bott => (bott()?, None),
        CheckId::ChiTable => (chi(), None),
        CheckId::Bounds => (bounds(), None),
    };
    Ok(Computed { values, verdict })
}

fn guan() -> Value {
    let third = q(1, 3);
    let mut admitting = BTreeSet::new();
    for d in 1..=24 {
        for p in 0..d {
            let t = q(p, d);
            if t >= third {
                break;
            }
            if !guan_gate(&t).expect("t in range").is_empty() {
                admitting.insert(t);
            }
        }
    }
    let at = guan_gate(&q(1, 8)).expect("t in range");
    json!({ "admitting_t": admitting, "a_x_at_t_1_8": at })
}

/// The lemma on the K3^[2] polynomial and on the a = 3 polynomial
/// 3·binom(T/(2q(l,m)) + 2, 2), for q(l,m) = 1 and 2.
fn star() -> Value {
    let k3 = k3n2_rr();
    let s2 = star_lemma(2, 2, 1, 2, &k3);
    let k3_qlm2 = rr_lagrangian_form(2, 1, 2, 0).expect("valid parameters");
    let a3 = |q_lm: i64| {
        let inner = RatPoly::linear(q(1, 2 * q_lm), Rational::integer(2));
        RRPolynomial::new(2, RatPoly::binomial_of(&inner, 2).scale(&Rational::integer(3)))
    };
    json!({
        "k3n2_q2": s2.conclusion,
        "k3n2_q2_scaled": s2.scaled.coeffs(),
        "k3n2_qlm2_q4": star_lemma(2, 2, 1, 4, &k3_qlm2).conclusion,
        "k3n2_q4_not_monic": star_lemma(2, 2, 1, 4, &k3).conclusion,
        "k3n2_c_prime_4": star_lemma(2, 2, 4, 2, &k3).conclusion,
        "a3_qlm1": star_lemma(2, 2, 3, 2, &a3(1)).conclusion,
        "a3_qlm2": star_lemma(2, 2, 3, 4, &a3(2)).conclusion,
    })
}

fn plane() -> (Value, Option<Status>) {
    let c = lagrangian_plane_certificate();
    let exact = c.back_substitution.iter().all(|b| b.residuals.iter().all(Rational::is_zero));
    let v = json!({
        "eliminated": c.eliminated.coeffs(),
        "resultant": c.resultant.coeffs(),
        "resultant_agrees": c.resultant_agrees,
        "discriminant": c.discriminant,
        "roots": c.roots,
        "integer_candidates_tested": c.integer_candidates.len(),
        "integer_roots": c.integer_roots,
        "x_zero_excluded": !c.x_zero_branch[0].is_zero(),
        "back_substitution_exact": exact,
        "verdict": c.status,
        "certificate": c.report(),
    });
    (v, Some(c.status))
}

fn case_summary(c: &SurfaceCase) -> Value {
    json!({
        "t": c.t,
        "forced_w": c.forced_w,
        "five_w_integral": c.five_w_integral,
        "verdict": c.status,
    })
}

fn surface() -> (Value, Option<Status>) {
    let c = contracted_surface_certificate();
    let v = json!({
        "cases": c.cases.iter().map(case_summary).collect::<Vec<_>>(),
        "probe": case_summary(&c.probe),
        "denominators": c.cases[0].denominators,
        "twice_square": c.cases.iter().map(|k| k.twice_square.coeffs().to_vec()).collect::<Vec<_>>(),
        "verdict": c.status,
        "certificate": c.report(),
    });
    (v, Some(c.status))
}

fn sigma() -> (Value, Option<Status>) {
    let c = sigma_split_certificate();
    let mut kill_paths = Vec::new();
    if !c.w_zero_square.is_integer() {
        kill_paths.push("integrality");
    }
    if c.w_lower_bound > c.w_upper_bound {
        kill_paths.push("witness");
    }
    let v = json!({
        "sigma1_square": c.sigma1_square.coeffs(),
        "sigma_product": c.sigma_product.coeffs(),
        "w_zero_square": c.w_zero_square,
        "w_lower_bound": c.w_lower_bound,
        "w_upper_bound": c.w_upper_bound,
        "square_at_lower_bound": c.square_at_lower_bound,
        "scan_size": c.scan.len(),
        "survivors": c.survivors,
        "kill_paths": kill_paths,
        "verdict": c.status,
        "certificate": c.report(),
    });
    (v, Some(c.status))
}

fn segre() -> Value {
    let s = segre_certificate();
    let big: Vec<Vec<_>> = s.matrix.iter().map(|r| r.iter().map(|&x| to_big(x)).collect()).collect();
    json!({
        "matrix": s.matrix,
        "determinant": s.determinant.to_string(),
        "nonzero": s.determinant != 0,
        "rank": s.rank,
        "cofactor_agrees": det_cofactor(&big) == to_big(s.determinant),
        "generators_agree": s.matrix == segre_rows_by_series(),
    })
}

fn koszul() -> Value {
    let k = koszul_counts(2);
    json!({
        "h0_l_plus_h0_m": k.h0_l_plus_h0_m,
        "ideal_lm": k.ideal_lm,
        "ideal_2l2m": k.ideal_2l2m,
        "h0_2l2m": k.h0_2l2m,
        "restricted_2l2m": k.restricted_2l2m,
        "restriction_rank": k.restriction_rank,
    })
}

fn castelnuovo() -> Value {
    let k = koszul_counts(2);
    json!({
        "quadrics_lower_bound": k.quadrics_lower_bound,
        "castelnuovo_max": k.castelnuovo_max,
        "contradiction": k.contradiction,
        "hopf_chain_forced": hopf_chain_bound(3, 3, 8),
    })
}

fn mukai() -> Result<Value, CliError> {
    let s = mukai_solve()?;
    let v = &s.vector;
    Ok(json!({
        "chi_inputs": mukai_inputs_from_table(),
        "vector": [v.rank, v.c1_coeff, v.s],
        "self_pairing": s.self_pairing,
        "spherical": v.is_spherical(),
    }))
}

fn cones() -> Result<Value, CliError> {
    let u = QuadLattice::hyperbolic();
    let mut classes = prime_exceptional_candidates(&u)?.classes;
    classes.sort_by_key(|c| c.coords().to_vec());
    let c1 = cone_report(0)?;
    let c2 = cone_report(1)?;
    Ok(json!({
        "exceptional_set": classes,
        "c1_exceptional": c1.exceptional_class,
        "c2_exceptional": c2.exceptional_class,
        "c1_mutually_dual": c1.mutually_dual,
        "c2_mutually_dual": c2.mutually_dual,
    }))
}

pub const REFLECTION_SEED: u64 = 0x6b34;
pub const REFLECTION_SAMPLE: usize = 100;

fn reflection() -> Result<Value, CliError> {
    let u = QuadLattice::hyperbolic();
    let e = NSClass::new(vec![-1, 1]);
    let r = reflection_about(&e, &u)?;
    let mut rng = ChaCha8Rng::seed_from_u64(REFLECTION_SEED);
    let sample: Vec<NSClass> = (0..REFLECTION_SAMPLE)
        .map(|_| NSClass::new(vec![rng.gen_range(-50..=50), rng.gen_range(-50..=50)]))
        .collect();
    let preserved = sample.iter().all(|v| u.q(&r.apply(v)) == u.q(v));
    let involution = sample.iter().all(|v| r.apply(&r.apply(v)) == *v);
    Ok(json!({
        "center": e,
        "image_l": r.apply(&NSClass::new(vec![1, 0])),
        "image_m": r.apply(&NSClass::new(vec![0, 1])),
        "sample_size": sample.len(),
        "q_preserved": preserved,
        "involution": involution,
    }))
}

fn bott() -> Result<Value, CliError> {
    let mut serre = true;
    for qq in 0..=2 {
        for d in -4..=4 {
            let (a0, a1, a2) = bott_p2(qq, d)?;
            serre &= (a2, a1, a0) == bott_p2(2 - qq, -d)?;
        }
    }
    let triple = |t: (i64, i64, i64)| json!([t.0, t.1, t.2]);
    Ok(json!({
        "o_1": triple(bott_p2(0, 1)?),
        "omega1_1": triple(bott_p2(1, 1)?),
        "omega2_1": triple(bott_p2(2, 1)?),
        "serre_duality": serre,
        "kl_gate": {
            "1": monomial_section_bound(2, 1).gate,
            "2": monomial_section_bound(2, 2).gate,
            "3": monomial_section_bound(2, 3).gate,
        },
    }))
}

fn chi() -> Value {
    let t = chi_table();
    let entries: serde_json::Map<String, Value> = t
        .entries
        .iter()
        .map(|e| (format!("{},{}", e.p, e.q), json!(e.chi)))
        .collect();
    let p = k3n2_rr();
    json!({
        "entries": entries,
        "k_l": t.k_l,
        "p_rr_minus_2": p.eval_int(-2),
        "p_rr_minus_4": p.eval_int(-4),
        "ledger": t,
    })
}

fn bounds() -> Value {
    use hk4_core::classifier::{fujiki_degree_bound, squarefree_a_filter};
    let f = squarefree_a_filter();
    let contains = [1u64, 2, 3, 5, 7, 10].iter().all(|a| f.contains(a));
    json!({
        "fujiki_degree_bound_2_1": fujiki_degree_bound(2, 1),
        "squarefree_filter": f,
        "contains_1_2_3_5_7_10": contains,
        "excludes_6": !f.contains(&6),
        "all_at_most_262": f.iter().all(|&a| a <= 262),
    })
}

fn to_big(x: i64) -> BigInt {
    BigInt::from(x)
}
