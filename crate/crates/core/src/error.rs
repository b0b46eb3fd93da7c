use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeilError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("nilpotency order must be at least 1")]
    ZeroNilpotency,
    #[error("improper ideal: {0}")]
    ImproperIdeal(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("elements belong to different Weil algebras")]
    AlgebraMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("base point violation: component {index} of the morphism has constant term {constant}")]
    BasePointViolation { index: usize, constant: String },
    #[error("ideal violation: generator `{generator}` maps to `{normal_form}`, which is not in the target ideal")]
    IdealViolation { generator: String, normal_form: String },
    #[error("morphism expects {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("morphism endpoints do not match")]
    EndpointMismatch,
    #[error("element is not invertible (augmentation is zero)")]
    NotInvertible,
    #[error("unknown algebra preset `{0}`")]
    UnknownPreset(String),
    #[error("presentation file: {0}")]
    Presentation(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("domain error: {primitive} is not defined at {at}")]
    Domain { primitive: String, at: String },
    #[error("{primitive} at {at} has no exact rational value; use real mode")]
    Inexact { primitive: String, at: String },
    #[error("expression is not polynomial: {0}")]
    NonPolynomial(String),
    #[error("expression arity {expected} but {got} inputs given")]
    Arity { expected: usize, got: usize },
    #[error("expression syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("unsupported space shape: {0}")]
    UnsupportedSpace(String),
    #[error("degree overflow: result has base degree {got} in block {block}, bound is {bound}")]
    DegreeOverflow { block: usize, got: u32, bound: u32 },
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("invalid D-morphism: {0}")]
    InvalidMorphism(String),
    #[error("configuration error: {0}")]
    Config(String),
}

/// Crate-wide error for callers that do not care which layer failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
}
