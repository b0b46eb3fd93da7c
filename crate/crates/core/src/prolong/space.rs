use std::fmt;
use std::sync::Arc;

use crate::error::LiftError;
use crate::scalar::Scalar;
use crate::weil::{tensor, WeilAlgebra, WeilElement, WeilMorphism};

/// Shapes on which prolongation is computed.
#[derive(Clone)]
pub enum FragmentSpace {
    Euclidean(usize),
    Product(Vec<FragmentSpace>),
    Prolonged(Box<FragmentSpace>, Arc<WeilAlgebra>),
}

impl PartialEq for FragmentSpace {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FragmentSpace::Euclidean(a), FragmentSpace::Euclidean(b)) => a == b,
            (FragmentSpace::Product(a), FragmentSpace::Product(b)) => a == b,
            (FragmentSpace::Prolonged(x, v), FragmentSpace::Prolonged(y, w)) => {
                x == y && WeilAlgebra::same(v, w)
            }
            _ => false,
        }
    }
}

impl fmt::Display for FragmentSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragmentSpace::Euclidean(1) => write!(f, "R"),
            FragmentSpace::Euclidean(m) => write!(f, "R^{m}"),
            FragmentSpace::Product(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            FragmentSpace::Prolonged(x, w) => {
                write!(f, "{x} (x) W[{}; dim {}]", w.names().join(","), w.dimension())
            }
        }
    }
}

impl fmt::Debug for FragmentSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FragmentSpace {
    /// Total number of real coordinates before prolongation (`None` if the
    /// tree contains a prolongation).
    pub fn base_dimension(&self) -> Option<usize> {
        match self {
            FragmentSpace::Euclidean(m) => Some(*m),
            FragmentSpace::Product(xs) => xs.iter().map(FragmentSpace::base_dimension).sum(),
            FragmentSpace::Prolonged(..) => None,
        }
    }

    /// Whether every prolongation sits directly on a Euclidean factor.
    pub fn is_normal(&self) -> bool {
        match self {
            FragmentSpace::Euclidean(_) => true,
            FragmentSpace::Product(xs) => xs.iter().all(FragmentSpace::is_normal),
            FragmentSpace::Prolonged(x, _) => matches!(**x, FragmentSpace::Euclidean(_)),
        }
    }

    /// Rewrite into normal form: products distribute over prolongation and
    /// iterated prolongations collapse to one by a tensor algebra.
    pub fn normalize(&self) -> FragmentSpace {
        match self {
            FragmentSpace::Euclidean(m) => FragmentSpace::Euclidean(*m),
            FragmentSpace::Product(xs) => FragmentSpace::Product(xs.iter().map(|x| x.normalize()).collect()),
            FragmentSpace::Prolonged(x, w) => prolong_space(&x.normalize(), w),
        }
    }
}

/// `X (x) W`, normalized.
pub fn prolong_space(x: &FragmentSpace, w: &Arc<WeilAlgebra>) -> FragmentSpace {
    match x {
        FragmentSpace::Euclidean(m) => FragmentSpace::Prolonged(Box::new(FragmentSpace::Euclidean(*m)), w.clone()),
        FragmentSpace::Product(xs) => FragmentSpace::Product(xs.iter().map(|x| prolong_space(x, w)).collect()),
        FragmentSpace::Prolonged(inner, v) => {
            let inner = inner.normalize();
            match inner {
                FragmentSpace::Euclidean(_) => {
                    FragmentSpace::Prolonged(Box::new(inner), tensor(v, w).algebra)
                }
                other => prolong_space(&prolong_space(&other, v), w),
            }
        }
    }
}

/// Data of a point, mirroring the shape tree.
#[derive(Clone, PartialEq, Debug)]
pub enum PointData<S: Scalar> {
    Coords(Vec<S>),
    Jets(Vec<WeilElement<S>>),
    Tuple(Vec<PointData<S>>),
}

/// A point of a (normalized) fragment space.
#[derive(Clone, PartialEq, Debug)]
pub struct WPoint<S: Scalar> {
    space: FragmentSpace,
    data: PointData<S>,
}

fn shape(msg: impl Into<String>) -> LiftError {
    LiftError::Shape(msg.into())
}

fn check_shape<S: Scalar>(space: &FragmentSpace, data: &PointData<S>) -> Result<(), LiftError> {
    match (space, data) {
        (FragmentSpace::Euclidean(m), PointData::Coords(c)) if c.len() == *m => Ok(()),
        (FragmentSpace::Prolonged(x, w), PointData::Jets(es)) => match **x {
            FragmentSpace::Euclidean(m) if es.len() == m => {
                if es.iter().all(|e| WeilAlgebra::same(e.algebra(), w)) {
                    Ok(())
                } else {
                    Err(shape("point element outside the prolonging algebra"))
                }
            }
            FragmentSpace::Euclidean(m) => Err(shape(format!("expected {m} jets, got {}", es.len()))),
            _ => Err(shape("space is not normalized")),
        },
        (FragmentSpace::Product(xs), PointData::Tuple(ds)) if xs.len() == ds.len() => {
            xs.iter().zip(ds).try_for_each(|(x, d)| check_shape(x, d))
        }
        _ => Err(shape(format!("data does not match the shape {space}"))),
    }
}

impl<S: Scalar> WPoint<S> {
    pub fn new(space: FragmentSpace, data: PointData<S>) -> Result<WPoint<S>, LiftError> {
        check_shape(&space, &data)?;
        Ok(WPoint { space, data })
    }

    /// A point of `R^m (x) W`.
    pub fn jets(w: &Arc<WeilAlgebra>, elements: Vec<WeilElement<S>>) -> Result<WPoint<S>, LiftError> {
        let space = prolong_space(&FragmentSpace::Euclidean(elements.len()), w);
        WPoint::new(space, PointData::Jets(elements))
    }

    pub fn space(&self) -> &FragmentSpace {
        &self.space
    }

    pub fn data(&self) -> &PointData<S> {
        &self.data
    }

    /// Flattened Weil-element components, in shape order.
    pub fn elements(&self) -> Vec<&WeilElement<S>> {
        fn walk<'a, S: Scalar>(d: &'a PointData<S>, out: &mut Vec<&'a WeilElement<S>>) {
            match d {
                PointData::Coords(_) => {}
                PointData::Jets(es) => out.extend(es.iter()),
                PointData::Tuple(ds) => ds.iter().for_each(|d| walk(d, out)),
            }
        }
        let mut out = Vec::new();
        walk(&self.data, &mut out);
        out
    }

    /// The components of a `R^m (x) W` point.
    pub fn as_jets(&self) -> Option<&[WeilElement<S>]> {
        match &self.data {
            PointData::Jets(es) => Some(es),
            _ => None,
        }
    }
}

/// `X (x) psi : X (x) W1 -> X (x) W2` for a normalized `X`.
#[derive(Clone, Debug)]
pub struct CrossAction {
    source: FragmentSpace,
    target: FragmentSpace,
    node: Node,
}

#[derive(Clone, Debug)]
enum Node {
    Apply(WeilMorphism),
    Tuple(Vec<Node>),
}

fn build(x: &FragmentSpace, psi: &WeilMorphism) -> Result<Node, LiftError> {
    Ok(match x {
        FragmentSpace::Euclidean(_) => Node::Apply(psi.clone()),
        FragmentSpace::Product(xs) => Node::Tuple(xs.iter().map(|x| build(x, psi)).collect::<Result<_, _>>()?),
        FragmentSpace::Prolonged(inner, v) => match **inner {
            FragmentSpace::Euclidean(_) => Node::Apply(WeilMorphism::tensor_left(v, psi)?),
            _ => return Err(shape("space is not normalized")),
        },
    })
}

fn act<S: Scalar>(node: &Node, d: &PointData<S>) -> Result<PointData<S>, LiftError> {
    Ok(match (node, d) {
        (Node::Apply(m), PointData::Jets(es)) => {
            PointData::Jets(es.iter().map(|e| m.apply(e)).collect::<Result<_, _>>()?)
        }
        (Node::Tuple(ns), PointData::Tuple(ds)) if ns.len() == ds.len() => {
            PointData::Tuple(ns.iter().zip(ds).map(|(n, d)| act(n, d)).collect::<Result<_, _>>()?)
        }
        _ => return Err(shape("point does not match the cross action")),
    })
}

impl CrossAction {
    pub fn new(x: &FragmentSpace, psi: &WeilMorphism) -> Result<CrossAction, LiftError> {
        let x = x.normalize();
        let node = build(&x, psi)?;
        Ok(CrossAction {
            source: prolong_space(&x, psi.source()),
            target: prolong_space(&x, psi.target()),
            node,
        })
    }

    pub fn source(&self) -> &FragmentSpace {
        &self.source
    }

    pub fn target(&self) -> &FragmentSpace {
        &self.target
    }

    pub fn apply<S: Scalar>(&self, p: &WPoint<S>) -> Result<WPoint<S>, LiftError> {
        if p.space != self.source {
            return Err(shape(format!("point lives in {}, action expects {}", p.space, self.source)));
        }
        WPoint::new(self.target.clone(), act(&self.node, &p.data)?)
    }
}

/// Convenience wrapper returning the map for `X` and `psi`.
pub fn cross_action(x: &FragmentSpace, psi: &WeilMorphism) -> Result<CrossAction, LiftError> {
    CrossAction::new(x, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn products_distribute() {
        let w = WeilAlgebra::preset("dual").unwrap();
        let r = FragmentSpace::Euclidean(1);
        let x = FragmentSpace::Product(vec![r.clone(), r.clone()]);
        assert_eq!(
            prolong_space(&x, &w),
            FragmentSpace::Product(vec![prolong_space(&r, &w), prolong_space(&r, &w)])
        );
    }

    #[test]
    fn nested_prolongation_becomes_tensor() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let j = WeilAlgebra::jet(2);
        let r = FragmentSpace::Euclidean(1);
        let nested = prolong_space(&prolong_space(&r, &d), &j);
        assert_eq!(nested, prolong_space(&r, &tensor(&d, &j).algebra));
        let FragmentSpace::Prolonged(_, w) = nested else { panic!() };
        assert_eq!(w.dimension(), 6);
    }

    #[test]
    fn cross_action_by_cube() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let t = WeilAlgebra::new(vec!["y".into()], vec![], 5).unwrap();
        let psi = WeilMorphism::parse(&d, &t, &["y^3"]).unwrap();
        let act = cross_action(&FragmentSpace::Euclidean(2), &psi).unwrap();
        let a = WeilElement::<Q>::from_coords(&d, vec![q(1), q(2)]).unwrap();
        let c = WeilElement::<Q>::from_coords(&d, vec![q(3), q(4)]).unwrap();
        let out = act.apply(&WPoint::jets(&d, vec![a, c]).unwrap()).unwrap();
        let jets = out.as_jets().unwrap();
        let y3 = crate::poly::parse_polynomial("y^3", &["y"]).unwrap();
        let expect = |a0: i64, b: i64| {
            WeilElement::<Q>::from_polynomial(&t, &y3).scale(&q(b)).add(&WeilElement::constant(&t, q(a0))).unwrap()
        };
        assert_eq!(jets[0], expect(1, 2));
        assert_eq!(jets[1], expect(3, 4));
    }

    #[test]
    fn zero_morphism_is_augmentation() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let r = WeilAlgebra::real();
        let act = cross_action(&FragmentSpace::Euclidean(1), &WeilMorphism::zero(&d, &r)).unwrap();
        let a = WeilElement::<Q>::from_coords(&d, vec![q(5), q(7)]).unwrap();
        let out = act.apply(&WPoint::jets(&d, vec![a]).unwrap()).unwrap();
        assert_eq!(out.as_jets().unwrap()[0].coords(), &[q(5)]);
    }

    #[test]
    fn cross_action_on_prolonged_factor() {
        let v = WeilAlgebra::preset("dual").unwrap();
        let w1 = WeilAlgebra::preset("dual").unwrap();
        let w2 = WeilAlgebra::jet(2);
        let psi = WeilMorphism::parse(&w1, &w2, &["t^2"]).unwrap();
        let x = prolong_space(&FragmentSpace::Euclidean(1), &v);
        let act = cross_action(&x, &psi).unwrap();
        let src = tensor(&v, &w1).algebra;
        assert_eq!(act.source(), &prolong_space(&FragmentSpace::Euclidean(1), &src));
        let e = WeilElement::<Q>::one(&src);
        let out = act.apply(&WPoint::jets(&src, vec![e]).unwrap()).unwrap();
        assert_eq!(out.as_jets().unwrap()[0].augmentation(), q(1));
    }
}
