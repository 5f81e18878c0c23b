//! Exact rational scalars and univariate polynomials over Q.
//!
//! Every quantity in the engine is a [`Rational`]; there is no floating-point
//! path. Integer-valuedness of polynomials is decided with the Newton
//! (binomial-basis) criterion rather than by sampling.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The integer value, if the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    /// The integer value as `i64`, if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Approximate decimal rendering for display only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => BigInt::from_str(s).map(Rational::from_bigint).map_err(|_| bad()),
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::from_bigints(n, d))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::integer(n)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $AssignTrait:ident, $assign:ident) => {
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $Trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $Trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $Trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::integer(rhs))
            }
        }
        impl<'a> $Trait<i64> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                self.$method(Rational::integer(rhs))
            }
        }
        impl $AssignTrait<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0.$assign(rhs.0);
            }
        }
        impl<'a> $AssignTrait<&'a Rational> for Rational {
            fn $assign(&mut self, rhs: &'a Rational) {
                self.0.$assign(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / &rhs.0)
    }
}

impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / rhs.0)
    }
}

impl<'b> Div<&'b Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &'b Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<i64> for Rational {
    type Output = Rational;
    fn div(self, rhs: i64) -> Rational {
        self / Rational::integer(rhs)
    }
}

impl Div<i64> for &Rational {
    type Output = Rational;
    fn div(self, rhs: i64) -> Rational {
        self / Rational::integer(rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand constructor used throughout the crate and its tests.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`.
pub fn binom(x: &Rational, k: u32) -> Rational {
    let numer: Rational = (0..k).map(|i| x - i as i64).product();
    numer / Rational::from_bigint(factorial(k))
}

/// Integer binomial coefficient for nonnegative arguments (zero when k > n).
pub fn binom_int(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    binom(&Rational::integer(n), k as u32)
        .to_i64()
        .expect("binomial overflow")
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_perfect_square(n: i64) -> bool {
    exact_isqrt(&BigInt::from(n)).is_some()
}

/// The nonnegative square root of `x` when `x` is the square of a rational.
///
/// Negative input is a contract violation and returns an error.
pub fn sqrt_rational(x: &Rational) -> Result<Option<Rational>, Error> {
    if x.is_negative() {
        return Err(Error::Precondition(format!(
            "sqrt_rational of negative value {x}"
        )));
    }
    let n = exact_isqrt(x.numer());
    let d = exact_isqrt(x.denom());
    Ok(match (n, d) {
        (Some(n), Some(d)) => Some(Rational::from_bigints(n, d)),
        _ => None,
    })
}

/// Squarefree part of a positive integer.
pub fn squarefree_part(mut n: u64) -> u64 {
    assert!(n > 0);
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * n
}

/// Positive divisors of |n| in increasing order (n != 0).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Polynomial with rational coefficients, lowest degree first.
///
/// The coefficient list never has trailing zeros; the zero polynomial is the
/// empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Rational>", from = "Vec<Rational>")]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl From<RatPoly> for Vec<Rational> {
    fn from(p: RatPoly) -> Self {
        p.coeffs
    }
}

impl From<Vec<Rational>> for RatPoly {
    fn from(v: Vec<Rational>) -> Self {
        RatPoly::new(v)
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// `slope * T + intercept`.
    pub fn linear(slope: Rational, intercept: Rational) -> Self {
        RatPoly::new(vec![intercept, slope])
    }

    /// The indeterminate `T`.
    pub fn var() -> Self {
        RatPoly::linear(Rational::one(), Rational::zero())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rational::integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `self(inner(T))`.
    pub fn compose(&self, inner: &RatPoly) -> Self {
        self.coeffs.iter().rev().fold(RatPoly::zero(), |acc, c| {
            &(&acc * inner) + &RatPoly::constant(c.clone())
        })
    }

    /// `binom(inner(T), k)` as a polynomial in `T`.
    pub fn binomial_of(inner: &RatPoly, k: u32) -> Self {
        let numer = (0..k).fold(RatPoly::constant(Rational::one()), |acc, i| {
            &acc * &(inner - &RatPoly::constant(Rational::integer(i as i64)))
        });
        numer.scale(&Rational::from_bigint(factorial(k)).recip())
    }

    /// Forward differences `Δ^k P(offset)` along the progression
    /// `offset + stride * j`, for `k = 0..=deg`.
    pub fn newton_coefficients(&self, stride: &Rational, offset: &Rational) -> Vec<Rational> {
        let n = self.degree().map_or(1, |d| d + 1);
        let mut row: Vec<Rational> = (0..n)
            .map(|j| self.eval(&(offset + stride * j as i64)))
            .collect();
        let mut out = Vec::with_capacity(n);
        while !row.is_empty() {
            out.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }
}

impl RatPoly {
    /// Integer multiple with coprime coefficients and positive leading term.
    pub fn primitive(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.leading().is_negative() {
            g = -g;
        }
        RatPoly::new(ints.into_iter().map(|c| Rational::from_bigints(c, g.clone())).collect())
    }

    /// Strips factors of T; returns the multiplicity removed and the cofactor.
    pub fn strip_var_powers(&self) -> (usize, RatPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, RatPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }

    /// Candidates ±p/q of the rational root test (p | a₀, q | aₙ) for the
    /// primitive part with the factors of T removed.
    pub fn rational_root_candidates(&self) -> Vec<Rational> {
        let (_, p) = self.strip_var_powers();
        let p = p.primitive();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let a0 = p.coeff(0).numer().clone();
        let an = p.leading().numer().clone();
        let mut out = std::collections::BTreeSet::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                let r = Rational::from_bigints(num.clone(), den);
                out.insert(-&r);
                out.insert(r);
            }
        }
        out.into_iter().collect()
    }

    /// All rational roots, without multiplicity, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let (k, _) = self.strip_var_powers();
        let mut roots: Vec<Rational> = self
            .rational_root_candidates()
            .into_iter()
            .filter(|r| self.eval(r).is_zero())
            .collect();
        if k > 0 {
            roots.push(Rational::zero());
            roots.sort();
        }
        roots
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(points: &[(Rational, Rational)]) -> RatPoly {
        let mut acc = RatPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = RatPoly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = RatPoly::linear(Rational::one(), -xj).scale(&(xi - xj).recip());
                    basis = &basis * &factor;
                }
            }
            acc = &acc + &basis;
        }
        acc
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != Rational::one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl<'b> Add<&'b RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &'b RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'b> Sub<&'b RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &'b RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'b> Mul<&'b RatPoly> for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &'b RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

/// Decides whether `p(offset + stride * j)` is an integer for every integer `j`.
///
/// Writing `p(offset + stride * j) = Σ_k Δ^k · binom(j, k)`, the values are
/// all integral exactly when every forward difference `Δ^k` at `j = 0` is.
pub fn integer_valued_on(p: &RatPoly, stride: i64, offset: i64) -> bool {
    assert!(stride > 0, "stride must be positive");
    p.newton_coefficients(&Rational::integer(stride), &Rational::integer(offset))
        .iter()
        .all(Rational::is_integer)
}

/// A point `offset + stride * j` where `p` is not an integer, searched over
/// `j` in `[-radius, radius]`.
pub fn non_integer_witness(p: &RatPoly, stride: i64, offset: i64, radius: i64) -> Option<i64> {
    (0..=radius)
        .flat_map(|j| [j, -j])
        .map(|j| offset + stride * j)
        .find(|&t| !p.eval(&Rational::integer(t)).is_integer())
}
