//! Truncated multivariate polynomials over the rationals and the linear
//! algebra that decides membership in `<generators> + m^k`.

mod monomial;
mod parse;
mod polynomial;
mod reduce;

pub use monomial::{binomial, monomials_below, monomials_in_blocks, Monomial};
pub use parse::{parse_polynomial, parse_rational};
pub use polynomial::{default_names, Polynomial};
pub use reduce::ReductionBasis;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("substitution into zero variables needs an explicit target ring")]
    EmptySubstitution,
}
