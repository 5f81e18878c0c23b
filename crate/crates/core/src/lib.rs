//! Exact-arithmetic certification engine for hyper-Kähler fourfolds of
//! K3^[2] type: BBF lattice calculus, Riemann–Roch integrality, the bounded
//! classification of the polarization degree `a`, and the UNSAT certificates
//! built on degree-4 Hodge classes.

pub mod classifier;
pub mod error;
pub mod exact;
pub mod fujiki;
pub mod h4;
pub mod lattice;
pub mod ledger;

pub use classifier::{classify, CaseReport, ClassifierState};
pub use error::{Error, Result};
pub use exact::{binom, integer_valued_on, q, sqrt_rational, RatPoly, Rational};
pub use fujiki::{BettiProfile, FujikiData, RRPolynomial};
pub use h4::{BoundaryWitness, H4Class, IntersectionMatrix};
pub use lattice::{ConeReport, NSClass, QuadLattice};
pub use ledger::{chi, chi_table, MukaiVector, SectionCountLedger};
