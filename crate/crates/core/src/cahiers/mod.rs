//! Polynomial-fragment model of the site of objects `C^inf(R^n) (x) W` and
//! of the functor `J`, with the currying and product identifications and a
//! probe of functoriality in the object.

mod curry;
mod fragment;
mod jspace;
mod morphism;
mod object;

pub use curry::{check_j_currying, check_j_products, curry_iso, CurriedElem, CurryIso, ProductLaw};
pub use fragment::FragmentElem;
pub use jspace::{eval_j, fragment_width, j_on_map, JMap, JSpace, JValue};
pub use morphism::{
    induced_action, probe_case, probe_functoriality, probe_outcome, random_dmorphism, random_object, DMorphism,
    InducedAction, PROBE_ALGEBRAS,
};
pub use object::{dobj_coproduct, DObject};
