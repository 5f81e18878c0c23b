use thiserror::Error;

use crate::exact::Rational;

/// Errors raised by the certification engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate pair: q(l,m) = 0")]
    DegeneratePair,

    #[error("class is not a (-2)-class: q(e) = {0}")]
    NotMinusTwo(i64),

    #[error("t0 must be 0 or 1, got {0}")]
    BadT0(i64),

    #[error("negative b4 = {b4} for (b2, b3) = ({b2}, {b3})")]
    NegativeB4 { b2: i64, b3: i64, b4: i64 },

    #[error("witness is not isotropic: q(omega) = {0}")]
    WitnessNotIsotropic(Rational),

    #[error("inconsistent Euler characteristic inputs: {0}")]
    InconsistentChi(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
