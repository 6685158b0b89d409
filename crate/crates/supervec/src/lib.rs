//! Exact symbolic computation for Lie superalgebras of polynomial vector
//! fields: superpolynomial arithmetic, superbrackets and Lie derivatives,
//! Weisfeiler gradings, Cartan prolongation by two independent methods, a
//! catalog of the classified series and exceptions (including mb(3|8) with
//! its dual Pfaff system), the toroidal multi-dimensional Virasoro algebra,
//! jet-space realizations with a desk-scale Koszul-Tate complex, and the
//! sl(3)+sl(2)+gl(1) weight tables.
//!
//! All arithmetic is exact; every check in this crate asserts rational
//! zero, never approximate equality. The core types are generic over the
//! scalar ring; the crate-root aliases fix the default instantiation with
//! arbitrary-precision rationals.

pub mod catalog;
pub mod linalg;
pub mod prolong;
pub mod coords;
pub mod error;
pub mod scalar;
pub mod superpoly;
pub mod svf;
pub mod toroidal;

pub use coords::{CoordSystem, Coords, Parity, VarSpec};
pub use error::{Error, Result};
pub use scalar::{frac, int, FieldScalar, Rat, Rat128, Scalar};

/// Superpolynomial over arbitrary-precision rationals.
pub type Poly = superpoly::SuperPolynomial<Rat>;
/// Super vector field over arbitrary-precision rationals.
pub type VectorField = svf::SuperVectorField<Rat>;
/// Super differential form over arbitrary-precision rationals.
pub type Form = svf::SuperForm<Rat>;
