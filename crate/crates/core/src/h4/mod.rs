//! Degree-4 Hodge classes on the very general fourfold with NS = U and
//! c_X = 3, over the basis (l², lm, m², q∨).

pub mod certificates;
pub mod mpoly;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Rational combination of l², lm, m² and q∨.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct H4Class {
    pub l2: Rational,
    pub lm: Rational,
    pub m2: Rational,
    pub qdual: Rational,
}

impl H4Class {
    pub fn new(l2: Rational, lm: Rational, m2: Rational, qdual: Rational) -> Self {
        H4Class { l2, lm, m2, qdual }
    }

    pub fn zero() -> Self {
        H4Class::default()
    }

    pub fn l2() -> Self {
        H4Class { l2: Rational::one(), ..Self::zero() }
    }

    pub fn lm() -> Self {
        H4Class { lm: Rational::one(), ..Self::zero() }
    }

    pub fn m2() -> Self {
        H4Class { m2: Rational::one(), ..Self::zero() }
    }

    pub fn qdual() -> Self {
        H4Class { qdual: Rational::one(), ..Self::zero() }
    }

    /// c₂(X) = (6/5) q∨.
    pub fn c2() -> Self {
        H4Class::qdual().scale(&Rational::new(6, 5))
    }

    /// The product (x₁ l + y₁ m)(x₂ l + y₂ m).
    pub fn product(a: (i64, i64), b: (i64, i64)) -> Self {
        H4Class {
            l2: Rational::integer(a.0 * b.0),
            lm: Rational::integer(a.0 * b.1 + a.1 * b.0),
            m2: Rational::integer(a.1 * b.1),
            qdual: Rational::zero(),
        }
    }

    pub fn coords(&self) -> [&Rational; 4] {
        [&self.l2, &self.lm, &self.m2, &self.qdual]
    }

    pub fn scale(&self, k: &Rational) -> Self {
        H4Class {
            l2: &self.l2 * k,
            lm: &self.lm * k,
            m2: &self.m2 * k,
            qdual: &self.qdual * k,
        }
    }

    pub fn is_integral_combination(&self) -> bool {
        self.coords().iter().all(|c| c.is_integer())
    }
}

impl fmt::Debug for H4Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})l^2 + ({})lm + ({})m^2 + ({})q",
            self.l2, self.lm, self.m2, self.qdual
        )
    }
}

impl<'b> Add<&'b H4Class> for &H4Class {
    type Output = H4Class;
    fn add(self, rhs: &'b H4Class) -> H4Class {
        H4Class {
            l2: &self.l2 + &rhs.l2,
            lm: &self.lm + &rhs.lm,
            m2: &self.m2 + &rhs.m2,
            qdual: &self.qdual + &rhs.qdual,
        }
    }
}

impl<'b> Sub<&'b H4Class> for &H4Class {
    type Output = H4Class;
    fn sub(self, rhs: &'b H4Class) -> H4Class {
        H4Class {
            l2: &self.l2 - &rhs.l2,
            lm: &self.lm - &rhs.lm,
            m2: &self.m2 - &rhs.m2,
            qdual: &self.qdual - &rhs.qdual,
        }
    }
}

impl Neg for &H4Class {
    type Output = H4Class;
    fn neg(self) -> H4Class {
        self.scale(&Rational::integer(-1))
    }
}

/// Gram matrix of the pairing on (l², lm, m², q∨).
pub const H4_GRAM: [[i64; 4]; 4] = [
    [0, 0, 2, 0],
    [0, 2, 0, 25],
    [2, 0, 0, 0],
    [0, 25, 0, 575],
];

/// ∫ α β on degree-4 classes.
pub fn h4_pair(a: &H4Class, b: &H4Class) -> Rational {
    let (x, y) = (a.coords(), b.coords());
    let mut s = Rational::zero();
    for (i, row) in H4_GRAM.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g != 0 {
                s += x[i] * y[j] * g;
            }
        }
    }
    s
}

/// (∫η l², ∫η lm; ∫η lm, ∫η m²).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionMatrix(pub [[Rational; 2]; 2]);

impl IntersectionMatrix {
    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(Rational::is_integer)
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        IntersectionMatrix(m.map(|row| row.map(Rational::integer)))
    }
}

pub fn intersection_matrix(eta: &H4Class) -> IntersectionMatrix {
    let a = h4_pair(eta, &H4Class::l2());
    let b = h4_pair(eta, &H4Class::lm());
    let d = h4_pair(eta, &H4Class::m2());
    IntersectionMatrix([[a, b.clone()], [b, d]])
}

/// ω = x l + y m + u e′ + v f′ in U ⊕ U with q(ω) = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWitness {
    pub x: Rational,
    pub y: Rational,
    pub u: Rational,
    pub v: Rational,
}

impl BoundaryWitness {
    pub fn new(x: Rational, y: Rational, u: Rational, v: Rational) -> Result<Self> {
        let w = BoundaryWitness { x, y, u, v };
        let qw = w.q();
        if !qw.is_zero() {
            return Err(Error::WitnessNotIsotropic(qw));
        }
        Ok(w)
    }

    /// l + m + e′ − f′.
    pub fn standard() -> Self {
        BoundaryWitness::new(
            Rational::one(),
            Rational::one(),
            Rational::one(),
            Rational::integer(-1),
        )
        .expect("standard witness is isotropic")
    }

    pub fn q(&self) -> Rational {
        (&self.x * &self.y + &self.u * &self.v) * 2
    }

    pub fn coords(&self) -> [Rational; 4] {
        [self.x.clone(), self.y.clone(), self.u.clone(), self.v.clone()]
    }

    /// q(ω, t l + u m) = t y + u x.
    pub fn pair_ns(&self, t: i64, u: i64) -> Rational {
        &self.y * t + &self.x * u
    }

    /// q(ω, l) ≥ 0 and q(ω, m) ≥ 0.
    pub fn in_nef_closure(&self) -> bool {
        !self.pair_ns(1, 0).is_negative() && !self.pair_ns(0, 1).is_negative()
    }
}

/// ∫ η ω², using ∫αβω² = 2 q(α,ω) q(β,ω) and ∫q∨ω² = 25 q(ω) = 0.
pub fn boundary_value(eta: &H4Class, omega: &BoundaryWitness) -> Result<Rational> {
    let qw = omega.q();
    if !qw.is_zero() {
        return Err(Error::WitnessNotIsotropic(qw));
    }
    let ql = omega.pair_ns(1, 0);
    let qm = omega.pair_ns(0, 1);
    let sym = &eta.l2 * &ql * &ql + &eta.lm * &ql * &qm + &eta.m2 * &qm * &qm;
    Ok(sym * 2 + &eta.qdual * qw * 25)
}
