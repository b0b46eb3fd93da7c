use std::sync::Arc;

use crate::error::LiftError;
use crate::scalar::{Scalar, Tolerance};
use crate::weil::{WeilAlgebra, WeilElement};

use super::expr::SmoothMap;
use super::space::WPoint;

/// `f (x) W` on a point of `R^n (x) W`.
pub fn taylor_lift<S: Scalar>(
    f: &SmoothMap,
    w: &Arc<WeilAlgebra>,
    point: &[WeilElement<S>],
) -> Result<Vec<WeilElement<S>>, LiftError> {
    if point.len() != f.arity() {
        return Err(LiftError::Arity { expected: f.arity(), got: point.len() });
    }
    if let Some(bad) = point.iter().position(|e| !WeilAlgebra::same(e.algebra(), w)) {
        return Err(LiftError::Shape(format!("input {bad} is not an element of the lifting algebra")));
    }
    let template = WeilElement::zero(w);
    f.eval(point, &template)
}

/// `taylor_lift` on a point of `R^n (x) W`, returning a point of `R^m (x) W`.
pub fn lift_point<S: Scalar>(f: &SmoothMap, p: &WPoint<S>) -> Result<WPoint<S>, LiftError> {
    let jets = p.as_jets().ok_or_else(|| LiftError::Shape("lift expects a point of R^n (x) W".into()))?;
    let w = match jets.first() {
        Some(e) => e.algebra().clone(),
        None => return Err(LiftError::Shape("empty point".into())),
    };
    WPoint::jets(&w, taylor_lift(f, &w, jets)?)
}

/// Canonical representative of the class of `f` modulo the ideal of `W`:
/// the lift of `f` at the generator point `(x_1, ..., x_n)`.
pub fn class_of<S: Scalar>(f: &SmoothMap, w: &Arc<WeilAlgebra>) -> Result<Vec<WeilElement<S>>, LiftError> {
    if f.arity() != w.nvars() {
        return Err(LiftError::Arity { expected: w.nvars(), got: f.arity() });
    }
    let gens: Vec<WeilElement<S>> = (0..w.nvars()).map(|i| WeilElement::variable(w, i)).collect();
    taylor_lift(f, w, &gens)
}

/// First differing component of two classes.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivWitness<S: Scalar> {
    pub component: usize,
    /// Normal form of `class(f) - class(g)` in that component.
    pub difference: WeilElement<S>,
    /// The base-point condition already fails.
    pub base_point_differs: bool,
}

/// Decide `f = g mod I`; on failure report the first differing component.
pub fn equiv_mod<S: Scalar>(
    f: &SmoothMap,
    g: &SmoothMap,
    w: &Arc<WeilAlgebra>,
) -> Result<Option<EquivWitness<S>>, LiftError> {
    equiv_mod_tol(f, g, w, Tolerance::default())
}

pub fn equiv_mod_tol<S: Scalar>(
    f: &SmoothMap,
    g: &SmoothMap,
    w: &Arc<WeilAlgebra>,
    tol: Tolerance,
) -> Result<Option<EquivWitness<S>>, LiftError> {
    if f.coarity() != g.coarity() {
        return Err(LiftError::Shape(format!("coarity {} vs {}", f.coarity(), g.coarity())));
    }
    let cf = class_of::<S>(f, w)?;
    let cg = class_of::<S>(g, w)?;
    Ok(first_difference(&cf, &cg, tol))
}

pub(crate) fn first_difference<S: Scalar>(
    a: &[WeilElement<S>],
    b: &[WeilElement<S>],
    tol: Tolerance,
) -> Option<EquivWitness<S>> {
    a.iter().zip(b).enumerate().find(|(_, (x, y))| !x.close_to(y, tol)).map(|(component, (x, y))| {
        EquivWitness {
            component,
            difference: x.sub(y).expect("same algebra"),
            base_point_differs: !x.augmentation().close_to(&y.augmentation(), tol),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::parse_map;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn square_on_dual_numbers() {
        let w = WeilAlgebra::preset("dual").unwrap();
        let f = parse_map("t^2", None).unwrap();
        let p = WeilElement::<Q>::from_coords(&w, vec![q(3, 1), q(5, 1)]).unwrap();
        let out = taylor_lift(&f, &w, &[p]).unwrap();
        assert_eq!(out[0].coords(), &[q(9, 1), q(30, 1)]);
    }

    #[test]
    fn identity_lift_is_identity() {
        let w = WeilAlgebra::preset("d2").unwrap();
        let f = parse_map("(t0, t1)", None).unwrap();
        let p = vec![
            WeilElement::<Q>::from_coords(&w, vec![q(1, 2), q(2, 1), q(-3, 1)]).unwrap(),
            WeilElement::<Q>::from_coords(&w, vec![q(0, 1), q(7, 3), q(1, 1)]).unwrap(),
        ];
        assert_eq!(taylor_lift(&f, &w, &p).unwrap(), p);
    }

    #[test]
    fn classes() {
        let w = WeilAlgebra::jet(2);
        let c = class_of::<Q>(&parse_map("(t, t^2 + t^3)", None).unwrap(), &w).unwrap();
        assert_eq!(c[0].coords(), &[q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(c[1].coords(), &[q(0, 1), q(0, 1), q(1, 1)]);
        let e = class_of::<Q>(&parse_map("exp(t)", None).unwrap(), &w).unwrap();
        assert_eq!(e[0].coords(), &[q(1, 1), q(1, 1), q(1, 2)]);
        let k = class_of::<Q>(&parse_map("(3/2, -1)", Some(1)).unwrap(), &w).unwrap();
        assert_eq!(k[0].augmentation(), q(3, 2));
        assert!(class_of::<Q>(&parse_map("log(t)", None).unwrap(), &w).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let w = WeilAlgebra::jet(2);
        let f = parse_map("(t, t^2)", None).unwrap();
        let g = parse_map("(t, t^2 + t^3)", None).unwrap();
        assert!(equiv_mod::<Q>(&f, &g, &w).unwrap().is_none());

        let zero = parse_map("0", Some(1)).unwrap();
        let one = parse_map("1", Some(1)).unwrap();
        let wit = equiv_mod::<Q>(&zero, &one, &w).unwrap().unwrap();
        assert!(wit.base_point_differs);
        assert_eq!(wit.component, 0);

        let d = WeilAlgebra::preset("dual").unwrap();
        let sin = parse_map("sin(t)", None).unwrap();
        let id = parse_map("t", None).unwrap();
        assert!(equiv_mod::<Q>(&sin, &id, &d).unwrap().is_none());
        let wit = equiv_mod::<Q>(&sin, &id, &WeilAlgebra::jet(3)).unwrap().unwrap();
        assert_eq!(wit.difference.coords()[3], q(-1, 6));
        assert!(!wit.base_point_differs);
    }
}
