use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::LiftError;
use crate::report::{run_cases, CheckReport, Failure};
use crate::sample;
use crate::scalar::{Scalar, ScalarMode, Tolerance};
use crate::weil::{WeilAlgebra, WeilElement, WeilMorphism};
use crate::Q;

use super::expr::{Expr, SmoothMap};
use super::lift::{class_of, equiv_mod_tol, taylor_lift};
use super::space::{prolong_space, FragmentSpace, PointData, WPoint};

/// Exact arithmetic unless the map uses transcendental primitives.
pub fn preferred_mode(f: &SmoothMap) -> ScalarMode {
    if f.outputs().iter().any(Expr::uses_primitives) {
        ScalarMode::Real
    } else {
        ScalarMode::Rational
    }
}

fn render<S: Scalar>(v: &[WeilElement<S>]) -> String {
    v.iter().map(|e| format!("[{e}]")).collect::<Vec<_>>().join(", ")
}

fn compare<S: Scalar>(
    a: &Result<Vec<WeilElement<S>>, LiftError>,
    b: &Result<Vec<WeilElement<S>>, LiftError>,
    tol: Tolerance,
    what: &str,
) -> Result<(), Failure> {
    match (a, b) {
        (Ok(x), Ok(y)) => {
            if x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.close_to(q, tol)) {
                Ok(())
            } else {
                Err(Failure::new(format!("{what}: the two paths differ")).with("left", render(x)).with("right", render(y)))
            }
        }
        // both paths leave the domain at the same base point
        (Err(LiftError::Domain { .. }), Err(LiftError::Domain { .. })) => Ok(()),
        (Err(e), _) | (_, Err(e)) => Err(Failure::new(format!("{what}: {e}"))),
    }
}

/// One naturality square `(phi (x) W2) o (R^n (x) psi) = (R^m (x) psi) o (phi (x) W1)`
/// at a random point.
pub fn naturality_case<S: Scalar, R: Rng + ?Sized>(
    phi: &SmoothMap,
    psi: &WeilMorphism,
    rng: &mut R,
    tol: Tolerance,
) -> Result<(), Failure> {
    let point: Vec<WeilElement<S>> = (0..phi.arity()).map(|_| sample::element(rng, psi.source())).collect();
    let moved: Vec<WeilElement<S>> = point.iter().map(|p| psi.apply(p)).collect::<Result<_, _>>()?;
    let lhs = taylor_lift(phi, psi.target(), &moved);
    let rhs = taylor_lift(phi, psi.source(), &point)
        .and_then(|v| v.iter().map(|e| psi.apply(e).map_err(LiftError::from)).collect());
    compare(&lhs, &rhs, tol, "naturality").map_err(|f| f.with("phi", phi).with("point", render(&point)))
}

/// Naturality of lifting against a Weil morphism on `samples` random points.
pub fn check_naturality(phi: &SmoothMap, psi: &WeilMorphism, samples: usize, seed: u64) -> CheckReport {
    let tol = Tolerance::default();
    match preferred_mode(phi) {
        ScalarMode::Rational => {
            run_cases("naturality", seed, samples, |rng| naturality_case::<Q, _>(phi, psi, rng, tol))
        }
        ScalarMode::Real => {
            run_cases("naturality", seed, samples, |rng| naturality_case::<f64, _>(phi, psi, rng, tol))
        }
    }
}

fn euclidean(x: &FragmentSpace) -> Result<usize, LiftError> {
    match x {
        FragmentSpace::Euclidean(m) => Ok(*m),
        other => Err(LiftError::Shape(format!("product check needs Euclidean factors, got {other}"))),
    }
}

/// Classes with rational arithmetic where exact, otherwise real.
pub fn classes_agree(
    f: &SmoothMap,
    g: &SmoothMap,
    w: &Arc<WeilAlgebra>,
    tol: Tolerance,
) -> Result<bool, LiftError> {
    match equiv_mod_tol::<Q>(f, g, w, tol) {
        Ok(r) => Ok(r.is_none()),
        Err(LiftError::Inexact { .. }) => Ok(equiv_mod_tol::<f64>(f, g, w, tol)?.is_none()),
        Err(e) => Err(e),
    }
}

fn product_identity<S: Scalar>(
    f: &SmoothMap,
    p: usize,
    w: &Arc<WeilAlgebra>,
    space: &FragmentSpace,
    tol: Tolerance,
) -> Result<(), Failure> {
    let whole = class_of::<S>(f, w)?;
    let left = class_of::<S>(&f.select(0..p), w)?;
    let right = class_of::<S>(&f.select(p..f.coarity()), w)?;
    let point = WPoint::new(
        space.clone(),
        PointData::Tuple(vec![PointData::Jets(left.clone()), PointData::Jets(right.clone())]),
    )?;
    let joined: Vec<WeilElement<S>> = point.elements().into_iter().cloned().collect();
    if joined.len() != whole.len() || !joined.iter().zip(&whole).all(|(a, b)| a.close_to(b, tol)) {
        return Err(Failure::new("class of the pair differs from the pair of classes")
            .with("whole", render(&whole))
            .with("pair", render(&joined)));
    }
    Ok(())
}

/// `class_of(f) = (class_of(pi1 o f), class_of(pi2 o f))`, read through
/// the product carrier; rational where exact.
pub fn class_of_pair(f: &SmoothMap, p: usize, w: &Arc<WeilAlgebra>, tol: Tolerance) -> Result<(), Failure> {
    let x = FragmentSpace::Euclidean(p);
    let y = FragmentSpace::Euclidean(f.coarity() - p);
    let space = prolong_space(&FragmentSpace::Product(vec![x, y]), w);
    match product_identity::<Q>(f, p, w, &space, tol) {
        Err(fail) if fail.message.contains("exact rational") => product_identity::<f64>(f, p, w, &space, tol),
        other => other,
    }
}

/// Plant, per output of `f`, an ideal element and sometimes a visible term;
/// equivalence of the pair must be the conjunction of the components, and
/// each must match what was planted.
pub fn planted_case<R: Rng + ?Sized>(
    f: &SmoothMap,
    p: usize,
    w: &Arc<WeilAlgebra>,
    rng: &mut R,
    tol: Tolerance,
) -> Result<(), Failure> {
    let q = f.coarity() - p;
    let mut expect = Vec::with_capacity(f.coarity());
    let outputs: Vec<Expr> = f
        .outputs()
        .iter()
        .map(|e| {
            let same = rng.gen_bool(0.6);
            expect.push(same);
            let mut g = Expr::add(e.clone(), ideal_element(rng, w));
            if !same {
                g = Expr::add(g, visible_term(rng, w));
            }
            g
        })
        .collect();
    let g = SmoothMap::new(f.arity(), outputs)?;
    let whole = classes_agree(f, &g, w, tol)?;
    let first = classes_agree(&f.select(0..p), &g.select(0..p), w, tol)?;
    let second = classes_agree(&f.select(p..p + q), &g.select(p..p + q), w, tol)?;
    let planted_first = expect[..p].iter().all(|b| *b);
    let planted_second = expect[p..].iter().all(|b| *b);
    if whole != (first && second) || first != planted_first || second != planted_second {
        return Err(Failure::new("equivalence of the pair is not componentwise")
            .with("f", f)
            .with("g", &g)
            .with("whole", whole)
            .with("first", first)
            .with("second", second));
    }
    Ok(())
}

/// A random element of the ideal of `w`, as an expression.
pub fn ideal_element<R: Rng + ?Sized>(rng: &mut R, w: &Arc<WeilAlgebra>) -> Expr {
    let rels = w.full_relations();
    let n = w.nvars();
    let mut acc = Expr::int(0);
    if rels.is_empty() {
        return acc;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let r = rels.choose(rng).expect("non-empty");
        let h = sample::polynomial(rng, n, 0, 2, 2);
        acc = Expr::add(acc, Expr::mul(Expr::from_polynomial(&h), Expr::from_polynomial(r)));
    }
    acc
}

/// A term that is nonzero in `w`.
pub fn visible_term<R: Rng + ?Sized>(rng: &mut R, w: &Arc<WeilAlgebra>) -> Expr {
    let m = w.quotient_basis().choose(rng).expect("basis is never empty").clone();
    let c = loop {
        let c = sample::rational(rng);
        if c != Q::from_integer(0.into()) {
            break c;
        }
    };
    Expr::from_polynomial(&crate::poly::Polynomial::monomial(m, c))
}

/// `(X x Y) (x) W = (X (x) W) x (Y (x) W)` on classes, and equivalence of
/// maps into a product is componentwise. Random `g` are built from `f` by
/// planting, per output, either an ideal element or a visible term.
pub fn check_product_preservation(
    x: &FragmentSpace,
    y: &FragmentSpace,
    w: &Arc<WeilAlgebra>,
    f: &SmoothMap,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, LiftError> {
    let (p, q) = (euclidean(x)?, euclidean(y)?);
    if f.coarity() != p + q {
        return Err(LiftError::Shape(format!("map has {} outputs, product has {}", f.coarity(), p + q)));
    }
    if f.arity() != w.nvars() {
        return Err(LiftError::Arity { expected: w.nvars(), got: f.arity() });
    }
    let tol = Tolerance::default();
    let product = FragmentSpace::Product(vec![x.clone(), y.clone()]);
    let space = prolong_space(&product, w);
    let mut report = CheckReport::new("product_preservation");
    let carrier = if space == FragmentSpace::Product(vec![prolong_space(x, w), prolong_space(y, w)]) {
        Ok(())
    } else {
        Err(Failure::new("prolongation does not distribute over the product"))
    };
    report.record(0, seed, carrier);
    report.record(1, seed, class_of_pair(f, p, w, tol));

    let planted = run_cases("product_preservation/planted", seed, samples, |rng| planted_case(f, p, w, rng, tol));
    report.absorb(planted);
    Ok(report)
}
