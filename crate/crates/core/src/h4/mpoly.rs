//! Sparse multivariate polynomials over Q with a Sylvester resultant.
//!
//! Only as much as the elimination cross-check needs: a handful of variables
//! and Sylvester matrices of size at most five.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{RatPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// Builds a polynomial from (coefficient, exponents) pairs.
    pub fn from_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = MPoly::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e.to_vec(), Rational::integer(*c));
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Coefficient of var^k, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, var: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Evaluates with every variable substituted.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k))
            })
            .sum()
    }

    /// The univariate polynomial in `var`, if no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<RatPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(RatPoly::new(coeffs))
    }
}

impl<'b> Add<&'b MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'b MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'b> Sub<&'b MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'b MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&Rational::integer(-1))
    }
}

impl<'b> Mul<&'b MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'b MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    match n {
        0 => MPoly::constant(nvars, Rational::one()),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MPoly::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &det(&minor, nvars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &MPoly, q: &MPoly, var: usize) -> MPoly {
    let nv = p.nvars();
    let (Some(dp), Some(dq)) = (p.degree_in(var), q.degree_in(var)) else {
        return MPoly::zero(nv);
    };
    let (dp, dq) = (dp as usize, dq as usize);
    let size = dp + dq;
    if size == 0 {
        return MPoly::constant(nv, Rational::one());
    }
    let pc: Vec<MPoly> = (0..=dp).rev().map(|k| p.coeff_in(var, k as u32)).collect();
    let qc: Vec<MPoly> = (0..=dq).rev().map(|k| q.coeff_in(var, k as u32)).collect();
    let mut rows = Vec::with_capacity(size);
    for i in 0..dq {
        let mut row = vec![MPoly::zero(nv); size];
        for (k, c) in pc.iter().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..dp {
        let mut row = vec![MPoly::zero(nv); size];
        for (k, c) in qc.iter().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    det(&rows, nv)
}
