//! Smooth maps as expression trees and their prolongation along Weil
//! algebras.

mod checks;
mod expr;
mod lift;
mod nested;
mod parse;
mod ring;
mod space;

pub use checks::{
    check_naturality, check_product_preservation, class_of_pair, classes_agree, ideal_element, naturality_case, planted_case,
    preferred_mode, visible_term,
};
pub use expr::{Expr, SmoothMap};
pub use lift::{class_of, equiv_mod, equiv_mod_tol, lift_point, taylor_lift, EquivWitness};
pub use nested::{assoc_iso, AssocIso, NestedElement};
pub use parse::{parse_expr, parse_map, parse_scalar};
pub use ring::{apply_series, series_in_ring, JetRing, Nilpotent};
pub use space::{cross_action, prolong_space, CrossAction, FragmentSpace, PointData, WPoint};
