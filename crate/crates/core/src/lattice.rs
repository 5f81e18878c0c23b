//! Integral quadratic lattices, the hyperbolic pair (l, m), reflections and
//! the cones of divisor classes.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Integer coordinate vector in a [`QuadLattice`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NSClass(Vec<i64>);

impl NSClass {
    pub fn new(coords: Vec<i64>) -> Self {
        NSClass(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// The `i`-th basis vector of a lattice of rank `rank`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        NSClass(v)
    }

    pub fn scale(&self, k: i64) -> Self {
        NSClass(self.0.iter().map(|x| x * k).collect())
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'b> Add<&'b NSClass> for &NSClass {
    type Output = NSClass;
    fn add(self, rhs: &'b NSClass) -> NSClass {
        assert_eq!(self.rank(), rhs.rank());
        NSClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'b> Sub<&'b NSClass> for &NSClass {
    type Output = NSClass;
    fn sub(self, rhs: &'b NSClass) -> NSClass {
        assert_eq!(self.rank(), rhs.rank());
        NSClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &NSClass {
    type Output = NSClass;
    fn neg(self) -> NSClass {
        NSClass(self.0.iter().map(|x| -x).collect())
    }
}

#[derive(Deserialize)]
struct RawLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

/// Integral symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct QuadLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

impl TryFrom<RawLattice> for QuadLattice {
    type Error = Error;
    fn try_from(raw: RawLattice) -> Result<Self> {
        let lat = QuadLattice::new(raw.gram)?;
        if lat.rank != raw.rank {
            return Err(Error::Dimension { expected: raw.rank, got: lat.rank });
        }
        Ok(lat)
    }
}

impl QuadLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::Precondition("empty Gram matrix".into()));
        }
        for row in &gram {
            if row.len() != rank {
                return Err(Error::Dimension { expected: rank, got: row.len() });
            }
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Precondition(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QuadLattice { rank, gram })
    }

    /// The hyperbolic plane U with basis (l, m).
    pub fn hyperbolic() -> Self {
        QuadLattice { rank: 2, gram: vec![vec![0, 1], vec![1, 0]] }
    }

    /// U ⊕ U with basis (l, m, e', f').
    pub fn hyperbolic_sum() -> Self {
        QuadLattice {
            rank: 4,
            gram: vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
            ],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn pair(&self, v: &NSClass, w: &NSClass) -> i64 {
        assert_eq!(v.rank(), self.rank, "class rank mismatch");
        assert_eq!(w.rank(), self.rank, "class rank mismatch");
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += v.0[i] * self.gram[i][j] * w.0[j];
            }
        }
        s
    }

    pub fn q(&self, v: &NSClass) -> i64 {
        self.pair(v, v)
    }

    /// Rational extension of the form to rational coordinates.
    pub fn pair_rational(&self, v: &[Rational], w: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.gram[i][j] != 0 {
                    s += &v[i] * &w[j] * self.gram[i][j];
                }
            }
        }
        s
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn check(&self, v: &NSClass) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::Dimension { expected: self.rank, got: v.rank() });
        }
        Ok(())
    }
}

/// Outcome of putting (l, m) into the normal form q(l,m) > 0, γ ∈ (−1, 1].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub gamma: Rational,
    pub sign_flip: bool,
    pub shift: i64,
    pub q_lm: i64,
    pub q_m: i64,
}

impl Normalization {
    pub fn is_identity(&self) -> bool {
        !self.sign_flip && self.shift == 0
    }
}

/// Replaces m by ±m + r·l so that q(l,m) > 0 and −q(l,m) < q(m) ≤ q(l,m).
pub fn hyperbolic_pair_normalize(q_l: i64, q_m: i64, q_lm: i64) -> Result<Normalization> {
    if q_l != 0 {
        return Err(Error::Precondition(format!("q(l) = {q_l}, expected 0")));
    }
    if q_lm == 0 {
        return Err(Error::DegeneratePair);
    }
    let sign_flip = q_lm < 0;
    let big_q = q_lm.abs();
    // q(m + r l) = q(m) + 2 r q(l,m)
    let shift = Integer::div_floor(&(big_q - q_m), &(2 * big_q));
    let new_q_m = q_m + 2 * shift * big_q;
    Ok(Normalization {
        gamma: Rational::new(new_q_m, big_q),
        sign_flip,
        shift,
        q_lm: big_q,
        q_m: new_q_m,
    })
}

/// Normalizes an explicit pair of classes; returns the new m.
pub fn normalize_classes(
    lattice: &QuadLattice,
    l: &NSClass,
    m: &NSClass,
) -> Result<(NSClass, Normalization)> {
    lattice.check(l)?;
    lattice.check(m)?;
    let norm = hyperbolic_pair_normalize(lattice.q(l), lattice.q(m), lattice.pair(l, m))?;
    let signed = if norm.sign_flip { -m } else { m.clone() };
    let new_m = &signed + &l.scale(norm.shift);
    Ok((new_m, norm))
}

/// The reflection α ↦ α + q(α, e)·e in a (−2)-class e.
#[derive(Clone, Debug)]
pub struct Reflection {
    lattice: QuadLattice,
    e: NSClass,
}

pub fn reflection_about(e: &NSClass, lattice: &QuadLattice) -> Result<Reflection> {
    lattice.check(e)?;
    let qe = lattice.q(e);
    if qe != -2 {
        return Err(Error::NotMinusTwo(qe));
    }
    Ok(Reflection { lattice: lattice.clone(), e: e.clone() })
}

impl Reflection {
    pub fn apply(&self, v: &NSClass) -> NSClass {
        v + &self.e.scale(self.lattice.pair(v, &self.e))
    }

    pub fn center(&self) -> &NSClass {
        &self.e
    }
}

/// One rejected candidate of the prime-exceptional scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRejection {
    pub class: NSClass,
    pub q: i64,
    pub dual_on_l: Rational,
    pub dual_on_m: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub classes: Vec<NSClass>,
    pub window: i64,
    pub negative_candidates: usize,
    pub rejections: Vec<ExceptionalRejection>,
    pub divisibility_argument: String,
}

pub const EXCEPTIONAL_WINDOW: i64 = 10;

/// Classes t·l + u·m with q < 0 whose form −2q(E,·)/q(E) is integral on l, m.
pub fn prime_exceptional_candidates(lattice: &QuadLattice) -> Result<ExceptionalReport> {
    if *lattice != QuadLattice::hyperbolic() {
        return Err(Error::Precondition(
            "prime exceptional scan needs the hyperbolic plane (0 1; 1 0)".into(),
        ));
    }
    let l = NSClass::basis(2, 0);
    let m = NSClass::basis(2, 1);
    let w = EXCEPTIONAL_WINDOW;
    let mut classes = Vec::new();
    let mut rejections = Vec::new();
    let mut negative = 0;
    for t in -w..=w {
        for u in -w..=w {
            let e = NSClass::new(vec![t, u]);
            let qe = lattice.q(&e);
            if qe >= 0 {
                continue;
            }
            negative += 1;
            let dual = |x: &NSClass| Rational::new(-2 * lattice.pair(&e, x), qe);
            let (fl, fm) = (dual(&l), dual(&m));
            if fl.is_integer() && fm.is_integer() {
                classes.push(e);
            } else {
                rejections.push(ExceptionalRejection { class: e, q: qe, dual_on_l: fl, dual_on_m: fm });
            }
        }
    }
    classes.sort();
    Ok(ExceptionalReport {
        classes,
        window: w,
        negative_candidates: negative,
        rejections,
        divisibility_argument: "for E = t l + u m with q(E) = 2tu < 0 the dual form takes \
                                values -1/t on l and -1/u on m; integrality forces |t| = |u| = 1 \
                                and q(E) < 0 forces t = -u, so the window is exhaustive"
            .into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    C1,
    C2,
}

/// One pairing entry of the Mov/Psef duality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityEntry {
    pub movable: NSClass,
    pub psef: NSClass,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub t0: i64,
    pub positive_rays: (NSClass, NSClass),
    pub movable_rays: (NSClass, NSClass),
    pub nef_rays: (NSClass, NSClass),
    pub psef_rays: (NSClass, NSClass),
    pub exceptional_class: Option<NSClass>,
    pub case_tag: CaseTag,
    pub duality: Vec<DualityEntry>,
    pub mutually_dual: bool,
}

/// Rays of the four cones on U in the cases t0 = 0 (C1) and t0 = 1 (C2).
pub fn cone_report(t0: i64) -> Result<ConeReport> {
    if !(0..=1).contains(&t0) {
        return Err(Error::BadT0(t0));
    }
    let lat = QuadLattice::hyperbolic();
    let l = NSClass::new(vec![1, 0]);
    let m = NSClass::new(vec![0, 1]);
    let mov = (l.clone(), NSClass::new(vec![t0, 1]));
    let psef = (l.clone(), NSClass::new(vec![-t0, 1]));
    let mut duality = Vec::new();
    for a in [&mov.0, &mov.1] {
        for b in [&psef.0, &psef.1] {
            duality.push(DualityEntry { movable: a.clone(), psef: b.clone(), q: lat.pair(a, b) });
        }
    }
    let mutually_dual = cones_dual(&lat, &mov, &psef) && cones_dual(&lat, &psef, &mov);
    Ok(ConeReport {
        t0,
        positive_rays: (l.clone(), m),
        movable_rays: mov.clone(),
        nef_rays: mov,
        psef_rays: psef,
        exceptional_class: (t0 == 1).then(|| NSClass::new(vec![-1, 1])),
        case_tag: if t0 == 0 { CaseTag::C1 } else { CaseTag::C2 },
        duality,
        mutually_dual,
    })
}

/// True when the q-dual of the cone spanned by `a` is the cone spanned by `b`
/// (rank 2): each ray of `b` pairs nonnegatively with `a` and is orthogonal
/// to one of its rays.
fn cones_dual(lat: &QuadLattice, a: &(NSClass, NSClass), b: &(NSClass, NSClass)) -> bool {
    let perp = |r: &NSClass| {
        // the two rays orthogonal to r, up to sign
        let g = lat.gram();
        let x = g[0][0] * r.coords()[0] + g[0][1] * r.coords()[1];
        let y = g[1][0] * r.coords()[0] + g[1][1] * r.coords()[1];
        NSClass::new(vec![-y, x])
    };
    let nonneg = [&b.0, &b.1]
        .iter()
        .all(|r| lat.pair(r, &a.0) >= 0 && lat.pair(r, &a.1) >= 0);
    let parallel = |u: &NSClass, v: &NSClass| {
        u.coords()[0] * v.coords()[1] - u.coords()[1] * v.coords()[0] == 0
    };
    let boundary = [&b.0, &b.1]
        .iter()
        .all(|r| parallel(r, &perp(&a.0)) || parallel(r, &perp(&a.1)));
    nonneg && boundary
}

/// True iff no d ≥ 2 has dⁿ | a.
pub fn saturation_check(a: u64, n: u32) -> bool {
    assert!(a >= 1 && n >= 1);
    let mut d: u64 = 2;
    while let Some(p) = d.checked_pow(n) {
        if p > a {
            break;
        }
        if a.is_multiple_of(p) {
            return false;
        }
        d += 1;
    }
    true
}
