//! Weil algebras as validated quotient presentations, their elements,
//! tensor products, and algebra morphisms.

mod algebra;
mod element;
mod morphism;
mod presentation;

pub use algebra::{tensor, Tensor, WeilAlgebra};
pub use element::WeilElement;
pub use morphism::{monomials_of_degree, WeilMorphism};
pub use presentation::WeilPresentation;
