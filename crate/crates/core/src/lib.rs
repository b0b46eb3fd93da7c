//! Computational kernel for Weil algebras and Weil prolongation.
//!
//! * [`poly`]: truncated rational polynomials and ideal membership.
//! * [`weil`]: Weil algebras, elements, tensor products and morphisms.
//! * [`prolong`]: smooth-map expressions, jet lifting, and the prolongation
//!   functor on Euclidean fragments.
//! * [`cahiers`]: the polynomial-fragment model of the site `D` and the
//!   functor `J`, with the currying isomorphisms and the functoriality probe.
//! * [`harness`]: seeded law suites and structured reports.

pub mod cahiers;
pub mod error;
pub mod harness;
pub mod report;
pub mod sample;
pub mod linalg;
pub mod poly;
pub mod prolong;
pub mod scalar;
pub mod weil;

pub use error::{Error, LiftError, ProbeError, WeilError};
pub use scalar::{Primitive, Scalar, ScalarMode, Tolerance};

/// Exact rational scalar.
pub type Q = num_rational::BigRational;
