//! Check builders, one function per suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cahiers::{
    dobj_coproduct, eval_j, probe_case, CurryIso, DObject, ProductLaw,
};
use crate::error::LiftError;
use crate::prolong::{
    class_of_pair, classes_agree, cross_action, ideal_element, naturality_case, parse_expr, planted_case,
    prolong_space, taylor_lift, visible_term, AssocIso, Expr, FragmentSpace, PointData, SmoothMap, WPoint,
};
use crate::report::{case_rng, case_seed, Failure};
use crate::sample;
use crate::scalar::{Scalar, Tolerance};
use crate::weil::{WeilAlgebra, WeilElement, WeilMorphism};
use crate::Q;

use super::corpus::DERIVATIVE_CORPUS;
use super::Check;

/// Resolved configuration shared by the builders.
#[derive(Clone)]
pub(crate) struct Ctx {
    pub seed: u64,
    pub cases: usize,
    pub degree_bound: u32,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub algebras: Vec<(String, Arc<WeilAlgebra>)>,
    pub tol: Tolerance,
}

impl Ctx {
    fn pool(&self, max_dim: usize) -> Vec<Arc<WeilAlgebra>> {
        let mut pool: Vec<Arc<WeilAlgebra>> = ["real", "dual", "jet2", "d2"]
            .iter()
            .map(|p| WeilAlgebra::preset(p).expect("preset"))
            .collect();
        pool.extend(self.algebras.iter().map(|(_, w)| w.clone()));
        pool.retain(|w| w.dimension() <= max_dim);
        pool
    }
}

pub(crate) fn build(suite: &str, ctx: &Ctx) -> Vec<Check> {
    match suite {
        "derivatives" => derivatives(ctx),
        "ring_laws" => ring_laws(ctx),
        "morphisms" => morphisms(ctx),
        "assoc" => assoc(ctx),
        "products" => products(ctx),
        "equivalence" => equivalence(ctx),
        "bifunctor" => bifunctor(ctx),
        "fragments" => fragments(ctx),
        "conjecture_probe" => conjecture_probe(ctx),
        _ => Vec::new(),
    }
}

/// A pool algebra most of the time, otherwise a fresh random one.
fn pick<R: Rng + ?Sized>(rng: &mut R, pool: &[Arc<WeilAlgebra>], max_dim: usize) -> Arc<WeilAlgebra> {
    if rng.gen_bool(0.3) {
        sample::algebra(rng, max_dim)
    } else {
        pool.choose(rng).expect("non-empty pool").clone()
    }
}

fn poly_map<R: Rng + ?Sized>(rng: &mut R, arity: usize, coarity: usize) -> SmoothMap {
    let outputs = (0..coarity).map(|_| sample::poly_expr(rng, arity, 2)).collect();
    SmoothMap::new(arity, outputs).expect("variables drawn below arity")
}

fn check_eq<T: PartialEq + std::fmt::Display>(lhs: &T, rhs: &T, law: &str) -> Result<(), Failure> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Failure::new(format!("{law} fails")).with("lhs", lhs).with("rhs", rhs))
    }
}

// derivatives

const DUAL_SYMBOLIC: Tolerance = Tolerance { rel: 1e-12, abs: 1e-12 };
const DUAL_FINITE: Tolerance = Tolerance { rel: 1e-6, abs: 1e-9 };
const JET_SYMBOLIC: Tolerance = Tolerance { rel: 1e-9, abs: 1e-12 };
const STEP: f64 = 1e-5;

/// Coefficients of the lift of `e` at `a + t` in `R[t]/(t^(order+1))`.
pub(crate) fn jet_coefficients(e: &Expr, order: u32, a: f64) -> Result<Vec<f64>, LiftError> {
    let w = WeilAlgebra::jet(order);
    let mut coords = vec![0.0; order as usize + 1];
    coords[0] = a;
    if order > 0 {
        coords[1] = 1.0;
    }
    let point = WeilElement::from_coords(&w, coords)?;
    let f = SmoothMap::scalar(1, e.clone())?;
    Ok(taylor_lift(&f, &w, &[point])?.remove(0).coords().to_vec())
}

fn close(what: &str, got: f64, want: f64, tol: Tolerance) -> Result<(), Failure> {
    if tol.close(got, want) {
        Ok(())
    } else {
        Err(Failure::new(format!("{what} mismatch")).with("got", got).with("want", want))
    }
}

fn derivative_point(e: &Expr, a: f64, max_order: u32) -> Result<(), Failure> {
    let tag = |f: Failure| f.with("expr", e).with("at", a);
    let d1 = e.diff(0);
    let dual = jet_coefficients(e, 1, a)?;
    close("dual value", dual[0], e.eval_f64(&[a])?, DUAL_SYMBOLIC).map_err(tag)?;
    close("dual vs symbolic", dual[1], d1.eval_f64(&[a])?, DUAL_SYMBOLIC).map_err(tag)?;
    let fd = (e.eval_f64(&[a + STEP])? - e.eval_f64(&[a - STEP])?) / (2.0 * STEP);
    close("dual vs finite difference", dual[1], fd, DUAL_FINITE).map_err(tag)?;
    let jets = jet_coefficients(e, max_order, a)?;
    let mut deriv = e.clone();
    let mut factorial = 1.0;
    for (j, c) in jets.iter().enumerate() {
        if j > 0 {
            deriv = deriv.diff(0);
            factorial *= j as f64;
        }
        close(&format!("order {j} jet vs symbolic"), c * factorial, deriv.eval_f64(&[a])?, JET_SYMBOLIC)
            .map_err(|f| tag(f).with("order", j))?;
    }
    Ok(())
}

fn derivatives(ctx: &Ctx) -> Vec<Check> {
    let tol = ctx.tol;
    let d2 = WeilAlgebra::preset("d2").expect("preset");
    vec![
        Check::new("derivatives/corpus", 1, |_| {
            for (src, points) in DERIVATIVE_CORPUS {
                let e = parse_expr(src)?;
                for &a in points.iter() {
                    derivative_point(&e, a, 4)?;
                }
            }
            Ok(())
        }),
        Check::counting("derivatives/random", ctx.cases, move |rng| {
            let e = sample::smooth_expr(rng, 1, 3);
            let a = sample::rational(rng).as_f64();
            let value = match e.eval_f64(&[a]) {
                Ok(v) => v,
                Err(LiftError::Domain { .. }) => return Ok(false),
                Err(err) => return Err(err.into()),
            };
            let jets = jet_coefficients(&e, 2, a)?;
            let d1 = e.diff(0);
            let d2 = d1.diff(0);
            let tag = |f: Failure| f.with("expr", &e).with("at", a);
            close("value", jets[0], value, tol).map_err(tag)?;
            close("first derivative", jets[1], d1.eval_f64(&[a])?, tol).map_err(tag)?;
            close("second derivative", 2.0 * jets[2], d2.eval_f64(&[a])?, tol).map_err(tag)?;
            Ok(true)
        }),
        Check::counting("derivatives/partials", ctx.cases, move |rng| {
            let e = sample::smooth_expr(rng, 2, 2);
            let (a, b) = (sample::rational(rng).as_f64(), sample::rational(rng).as_f64());
            let value = match e.eval_f64(&[a, b]) {
                Ok(v) => v,
                Err(LiftError::Domain { .. }) => return Ok(false),
                Err(err) => return Err(err.into()),
            };
            let x = WeilElement::<f64>::variable(&d2, 0);
            let y = WeilElement::<f64>::variable(&d2, 1);
            let point = [
                x.add(&WeilElement::constant(&d2, a))?,
                y.add(&WeilElement::constant(&d2, b))?,
            ];
            let f = SmoothMap::scalar(2, e.clone())?;
            let got = taylor_lift(&f, &d2, &point)?.remove(0);
            let want = WeilElement::constant(&d2, value)
                .add(&x.scale(&e.diff(0).eval_f64(&[a, b])?))?
                .add(&y.scale(&e.diff(1).eval_f64(&[a, b])?))?;
            if got.close_to(&want, tol) {
                Ok(true)
            } else {
                Err(Failure::new("lift at (a + x, b + y) is not the gradient")
                    .with("expr", &e)
                    .with("got", got)
                    .with("want", want))
            }
        }),
    ]
}

// ring laws

/// Ring axioms, augmentation and nilpotency on a random triple, plus
/// agreement of the multiplication table with polynomial reduction.
pub(crate) fn ring_case<R: Rng + ?Sized>(w: &Arc<WeilAlgebra>, rng: &mut R) -> Result<(), Failure> {
    let a = sample::element::<Q, R>(rng, w);
    let b = sample::element::<Q, R>(rng, w);
    let c = sample::element::<Q, R>(rng, w);
    let one = WeilElement::<Q>::one(w);
    let zero = WeilElement::<Q>::zero(w);
    let tag = |f: Failure| f.with("a", &a).with("b", &b).with("c", &c);
    let run = || -> Result<(), Failure> {
        check_eq(&a.mul(&b)?.mul(&c)?, &a.mul(&b.mul(&c)?)?, "associativity of products")?;
        check_eq(&a.add(&b)?.add(&c)?, &a.add(&b.add(&c)?)?, "associativity of sums")?;
        check_eq(&a.mul(&b)?, &b.mul(&a)?, "commutativity")?;
        check_eq(&a.mul(&b.add(&c)?)?, &a.mul(&b)?.add(&a.mul(&c)?)?, "distributivity")?;
        check_eq(&one.mul(&a)?, &a, "unit")?;
        check_eq(&a.add(&zero)?, &a, "additive unit")?;
        check_eq(&a.add(&a.neg())?, &zero, "additive inverse")?;
        check_eq(&a.mul(&b)?.augmentation(), &(a.augmentation() * b.augmentation()), "augmentation of products")?;
        check_eq(&a.add(&b)?.augmentation(), &(a.augmentation() + b.augmentation()), "augmentation of sums")?;
        check_eq(&one.augmentation(), &Q::from_integer(1.into()), "augmentation of one")?;
        let k = w.nilpotency_order() as i64;
        check_eq(&a.nilpotent_part().pow(k)?, &zero, "nilpotency")?;
        let reduced = WeilElement::<Q>::from_polynomial(w, &a.to_polynomial().mul(&b.to_polynomial())?);
        check_eq(&a.mul(&b)?, &reduced, "table product equals reduced product")?;
        if a.augmentation() != Q::from_integer(0.into()) {
            check_eq(&a.mul(&a.inverse()?)?, &one, "inverse")?;
        }
        Ok(())
    };
    run().map_err(tag)
}

fn ring_laws(ctx: &Ctx) -> Vec<Check> {
    let mut algebras = ctx.algebras.clone();
    for j in 0..8 {
        let mut rng = case_rng(case_seed(ctx.seed, "ring_laws/algebras", j));
        algebras.push((format!("random{j}"), sample::algebra(&mut rng, 30)));
    }
    algebras
        .into_iter()
        .map(|(label, w)| Check::new(format!("ring_laws/{label}"), ctx.cases, move |rng| ring_case(&w, rng)))
        .collect()
}

// morphisms

fn morphism_laws<R: Rng + ?Sized>(pool: &[Arc<WeilAlgebra>], rng: &mut R) -> Result<(), Failure> {
    let ws: Vec<Arc<WeilAlgebra>> = (0..4).map(|_| pick(rng, pool, 12)).collect();
    let f = sample::morphism(rng, &ws[0], &ws[1]);
    let g = sample::morphism(rng, &ws[1], &ws[2]);
    let h = sample::morphism(rng, &ws[2], &ws[3]);
    let a = sample::element::<Q, R>(rng, &ws[0]);
    let b = sample::element::<Q, R>(rng, &ws[0]);
    let tag = |fail: Failure| fail.with("f", f.display_components().join(", ")).with("a", &a).with("b", &b);
    let run = || -> Result<(), Failure> {
        check_eq(&f.apply(&a.mul(&b)?)?, &f.apply(&a)?.mul(&f.apply(&b)?)?, "multiplicativity")?;
        check_eq(&f.apply(&a.add(&b)?)?, &f.apply(&a)?.add(&f.apply(&b)?)?, "additivity")?;
        check_eq(&f.apply(&WeilElement::<Q>::one(&ws[0]))?, &WeilElement::one(&ws[1]), "unit")?;
        check_eq(&f.apply(&a)?.augmentation(), &a.augmentation(), "augmentation")?;
        let fg = f.then(&g)?;
        check_eq(&fg.apply(&a)?, &g.apply(&f.apply(&a)?)?, "composite acts stepwise")?;
        let left = fg.then(&h)?;
        let right = f.then(&g.then(&h)?)?;
        if !left.same_action(&right) {
            return Err(Failure::new("composition is not associative"));
        }
        let id0 = WeilMorphism::identity(&ws[0]);
        let id1 = WeilMorphism::identity(&ws[1]);
        if !id0.then(&f)?.same_representative(&f) || !f.then(&id1)?.same_representative(&f) {
            return Err(Failure::new("identity is not neutral"));
        }
        Ok(())
    };
    run().map_err(tag)
}

fn tensor_left_case<R: Rng + ?Sized>(pool: &[Arc<WeilAlgebra>], rng: &mut R) -> Result<(), Failure> {
    let v = pick(rng, pool, 4);
    let ws: Vec<Arc<WeilAlgebra>> = (0..3).map(|_| pick(rng, pool, 4)).collect();
    let f = sample::morphism(rng, &ws[0], &ws[1]);
    let g = sample::morphism(rng, &ws[1], &ws[2]);
    let whole = WeilMorphism::tensor_left(&v, &f.then(&g)?)?;
    let steps = WeilMorphism::tensor_left(&v, &f)?.then(&WeilMorphism::tensor_left(&v, &g)?)?;
    if !whole.same_action(&steps) {
        return Err(Failure::new("V (x) - does not preserve composition")
            .with("f", f.display_components().join(", "))
            .with("g", g.display_components().join(", ")));
    }
    let id = WeilMorphism::tensor_left(&v, &WeilMorphism::identity(&ws[0]))?;
    if !id.same_action(&WeilMorphism::identity(id.source())) {
        return Err(Failure::new("V (x) - does not preserve identities"));
    }
    Ok(())
}

fn morphisms(ctx: &Ctx) -> Vec<Check> {
    let pool = Arc::new(ctx.pool(12));
    let small = Arc::new(ctx.pool(4));
    vec![
        Check::new("morphisms/laws", ctx.cases, move |rng| morphism_laws(&pool, rng)),
        Check::new("morphisms/tensor_left", ctx.cases, move |rng| tensor_left_case(&small, rng)),
    ]
}

// assoc

pub const ASSOC_ALGEBRAS: [&str; 4] = ["dual", "jet2", "jet3", "d2"];
const ASSOC_ARITY: usize = 2;

fn assoc(ctx: &Ctx) -> Vec<Check> {
    let lift_cases = (ctx.cases / 10).max(20);
    let mut checks = Vec::new();
    for a in ASSOC_ALGEBRAS {
        for b in ASSOC_ALGEBRAS {
            let w1 = WeilAlgebra::preset(a).expect("preset");
            let w2 = WeilAlgebra::preset(b).expect("preset");
            let iso = Arc::new(AssocIso::new(ASSOC_ARITY, &w1, &w2));
            let prefix = format!("assoc/{a}*{b}");
            let i1 = iso.clone();
            checks.push(Check::new(format!("{prefix}/basis"), 1, move |_| i1.check_basis()));
            let i2 = iso.clone();
            checks.push(Check::new(format!("{prefix}/laws"), ctx.cases, move |rng| i2.laws_case(rng)));
            checks.push(Check::new(format!("{prefix}/lift"), lift_cases, move |rng| {
                let coarity = rng.gen_range(1..=2);
                let f = poly_map(rng, ASSOC_ARITY, coarity);
                iso.lift_case(&f, rng)
            }));
        }
    }
    checks
}

// products and equivalence

fn random_map<R: Rng + ?Sized>(rng: &mut R, arity: usize, coarity: usize) -> SmoothMap {
    let outputs = (0..coarity)
        .map(|_| if rng.gen_bool(0.5) { sample::poly_expr(rng, arity, 3) } else { sample::smooth_expr(rng, arity, 2) })
        .collect();
    SmoothMap::new(arity, outputs).expect("variables drawn below arity")
}

fn products(ctx: &Ctx) -> Vec<Check> {
    let pool = Arc::new(ctx.pool(12));
    let tol = ctx.tol;
    vec![Check::new("products/planted", ctx.cases, move |rng| {
        let w = pick(rng, &pool, 12);
        let (p, q) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f = random_map(rng, w.nvars(), p + q);
        let x = FragmentSpace::Euclidean(p);
        let y = FragmentSpace::Euclidean(q);
        let product = prolong_space(&FragmentSpace::Product(vec![x.clone(), y.clone()]), &w);
        if product != FragmentSpace::Product(vec![prolong_space(&x, &w), prolong_space(&y, &w)]) {
            return Err(Failure::new("prolongation does not distribute over the product"));
        }
        class_of_pair(&f, p, &w, tol).map_err(|e| e.with("f", &f))?;
        planted_case(&f, p, &w, rng, tol)
    })]
}

fn plant<R: Rng + ?Sized>(rng: &mut R, f: &SmoothMap, w: &Arc<WeilAlgebra>) -> SmoothMap {
    let outputs = f.outputs().iter().map(|e| Expr::add(e.clone(), ideal_element(rng, w))).collect();
    SmoothMap::new(f.arity(), outputs).expect("same arity")
}

fn equivalence_case<R: Rng + ?Sized>(pool: &[Arc<WeilAlgebra>], rng: &mut R, tol: Tolerance) -> Result<(), Failure> {
    let w = pick(rng, pool, 12);
    let r = rng.gen_range(1..=2);
    let f = random_map(rng, w.nvars(), r);
    let g = plant(rng, &f, &w);
    let h = plant(rng, &g, &w);
    let mut outputs = f.outputs().to_vec();
    let slot = rng.gen_range(0..r);
    outputs[slot] = Expr::add(outputs[slot].clone(), visible_term(rng, &w));
    let k = SmoothMap::new(f.arity(), outputs)?;
    let eq = |a: &SmoothMap, b: &SmoothMap| classes_agree(a, b, &w, tol);
    let tag = |fail: Failure| fail.with("f", &f).with("g", &g);
    let mut run = || -> Result<(), Failure> {
        if !eq(&f, &f)? {
            return Err(Failure::new("not reflexive"));
        }
        if !eq(&f, &g)? || !eq(&g, &f)? {
            return Err(Failure::new("planted ideal element changes the class, or relation is not symmetric"));
        }
        if !eq(&g, &h)? || !eq(&f, &h)? {
            return Err(Failure::new("not transitive"));
        }
        if eq(&f, &k)? || eq(&k, &f)? {
            return Err(Failure::new("planted visible term goes unnoticed").with("k", &k));
        }
        let s = rng.gen_range(1..=2);
        let phi = poly_map(rng, r, s);
        if !eq(&f.then(&phi)?, &g.then(&phi)?)? {
            return Err(Failure::new("not a congruence for postcomposition").with("phi", &phi));
        }
        Ok(())
    };
    run().map_err(tag)
}

fn equivalence(ctx: &Ctx) -> Vec<Check> {
    let pool = Arc::new(ctx.pool(12));
    let tol = ctx.tol;
    vec![Check::new("equivalence/relation", ctx.cases, move |rng| equivalence_case(&pool, rng, tol))]
}

// bifunctor

fn lift_functoriality<R: Rng + ?Sized>(pool: &[Arc<WeilAlgebra>], rng: &mut R) -> Result<(), Failure> {
    let w = pick(rng, pool, 12);
    let (a, b, c) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
    let phi1 = poly_map(rng, a, b);
    let phi2 = poly_map(rng, b, c);
    let point: Vec<WeilElement<Q>> = (0..a).map(|_| sample::element(rng, &w)).collect();
    let whole = taylor_lift(&phi1.then(&phi2)?, &w, &point)?;
    let steps = taylor_lift(&phi2, &w, &taylor_lift(&phi1, &w, &point)?)?;
    if whole != steps {
        return Err(Failure::new("lift of a composite differs from the composite of lifts")
            .with("phi1", &phi1)
            .with("phi2", &phi2));
    }
    if taylor_lift(&SmoothMap::identity(a), &w, &point)? != point {
        return Err(Failure::new("lift of the identity is not the identity"));
    }
    Ok(())
}

/// Random normalized space built from Euclidean and prolonged factors.
fn random_space<R: Rng + ?Sized>(rng: &mut R, pool: &[Arc<WeilAlgebra>]) -> FragmentSpace {
    let factor = |rng: &mut R| {
        let m = rng.gen_range(1..=2);
        if rng.gen_bool(0.5) {
            FragmentSpace::Euclidean(m)
        } else {
            FragmentSpace::Prolonged(Box::new(FragmentSpace::Euclidean(m)), pool.choose(rng).expect("pool").clone())
        }
    };
    if rng.gen_bool(0.4) {
        FragmentSpace::Product(vec![factor(rng), factor(rng)])
    } else {
        factor(rng)
    }
}

/// Random point data on a normalized prolonged space.
fn random_point<R: Rng + ?Sized>(rng: &mut R, space: &FragmentSpace) -> PointData<Q> {
    match space {
        FragmentSpace::Euclidean(m) => PointData::Coords((0..*m).map(|_| sample::rational(rng)).collect()),
        FragmentSpace::Prolonged(x, w) => {
            let m = x.base_dimension().unwrap_or(0);
            PointData::Jets((0..m).map(|_| sample::element(rng, w)).collect())
        }
        FragmentSpace::Product(xs) => PointData::Tuple(xs.iter().map(|x| random_point(rng, x)).collect()),
    }
}

fn cross_functoriality<R: Rng + ?Sized>(pool: &[Arc<WeilAlgebra>], rng: &mut R) -> Result<(), Failure> {
    let x = random_space(rng, pool);
    let ws: Vec<Arc<WeilAlgebra>> = (0..3).map(|_| pick(rng, pool, 4)).collect();
    let f = sample::morphism(rng, &ws[0], &ws[1]);
    let g = sample::morphism(rng, &ws[1], &ws[2]);
    let first = cross_action(&x, &f)?;
    let point = WPoint::new(first.source().clone(), random_point(rng, first.source()))?;
    let whole = cross_action(&x, &f.then(&g)?)?.apply(&point)?;
    let steps = cross_action(&x, &g)?.apply(&first.apply(&point)?)?;
    if whole != steps {
        return Err(Failure::new("X (x) - does not preserve composition").with("space", &x));
    }
    if cross_action(&x, &WeilMorphism::identity(&ws[0]))?.apply(&point)? != point {
        return Err(Failure::new("X (x) - does not preserve identities").with("space", &x));
    }
    Ok(())
}

fn bifunctor(ctx: &Ctx) -> Vec<Check> {
    let pool = Arc::new(ctx.pool(12));
    let small = Arc::new(ctx.pool(4));
    let tol = ctx.tol;
    let (p1, p2, p3) = (pool.clone(), pool.clone(), pool);
    vec![
        Check::new("bifunctor/lift_functoriality", ctx.cases, move |rng| lift_functoriality(&p1, rng)),
        Check::new("bifunctor/naturality", ctx.cases, move |rng| {
            let w1 = pick(rng, &p2, 12);
            let w2 = pick(rng, &p2, 12);
            let psi = sample::morphism(rng, &w1, &w2);
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let phi = poly_map(rng, a, b);
            naturality_case::<Q, _>(&phi, &psi, rng, tol)
        }),
        Check::new("bifunctor/naturality_real", ctx.cases, move |rng| {
            let w1 = pick(rng, &p3, 12);
            let w2 = pick(rng, &p3, 12);
            let psi = sample::morphism(rng, &w1, &w2);
            let arity = rng.gen_range(1..=2);
            let phi = SmoothMap::new(arity, vec![sample::smooth_expr(rng, arity, 2)])?;
            naturality_case::<f64, _>(&phi, &psi, rng, tol)
        }),
        Check::new("bifunctor/cross_functoriality", ctx.cases, move |rng| cross_functoriality(&small, rng)),
    ]
}

// fragments

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::from_integer(0.into()); n];
    v[i] = Q::from_integer(1.into());
    v
}

/// Number of monomials with degree at most `d` in each block, by brute force.
fn count_block_monomials(blocks: &[usize], d: u32) -> u64 {
    fn in_block(vars: usize, d: u32) -> u64 {
        if vars == 0 {
            return 1;
        }
        (0..=d).map(|e| in_block(vars - 1, d - e)).sum()
    }
    blocks.iter().map(|&b| in_block(b, d)).product()
}

fn eval_j_case(ctx: &Ctx, algebras: &[(String, Arc<WeilAlgebra>)]) -> Result<(), Failure> {
    let spaces = [
        FragmentSpace::Euclidean(0),
        FragmentSpace::Euclidean(1),
        FragmentSpace::Euclidean(2),
        FragmentSpace::Product(vec![FragmentSpace::Euclidean(1), FragmentSpace::Euclidean(2)]),
    ];
    let mut arities: Vec<usize> = ctx.n.iter().chain(&ctx.m).copied().collect();
    arities.sort_unstable();
    arities.dedup();
    let small: Vec<&Arc<WeilAlgebra>> = algebras.iter().map(|(_, w)| w).filter(|w| w.dimension() <= 4).collect();
    for d in 0..=ctx.degree_bound {
        for (label, w) in algebras {
            for &n in &arities {
                let c = DObject::new(n, w);
                for x in &spaces {
                    let j = eval_j(x, &c, d)?;
                    let width = x.base_dimension().unwrap_or(0) as u64;
                    let counted = width * count_block_monomials(&[n], d) * w.dimension() as u64;
                    if j.dimension() as u64 != j.dimension_formula() || j.dimension() as u64 != counted {
                        return Err(Failure::new("dimension formula disagrees with enumeration")
                            .with("algebra", label)
                            .with("n", n)
                            .with("d", d)
                            .with("space", x));
                    }
                    if j.dimension() <= 200 {
                        for k in 0..j.dimension() {
                            let b = j.basis_vector(k);
                            if j.coords(&b)? != unit(j.dimension(), k) || j.from_coords(&unit(j.dimension(), k))? != b {
                                return Err(Failure::new("basis enumeration is not the coordinate basis")
                                    .with("algebra", label)
                                    .with("index", k));
                            }
                        }
                    }
                }
            }
        }
        for &n in &ctx.n {
            for &m in &ctx.m {
                for w in &small {
                    for w2 in &small {
                        let c = dobj_coproduct(&DObject::new(n, w), &DObject::new(m, w2));
                        let j = eval_j(&FragmentSpace::Euclidean(1), &c, d)?;
                        let counted = count_block_monomials(&[n, m], d) * c.weil().dimension() as u64;
                        if j.dimension() as u64 != j.dimension_formula() || j.dimension() as u64 != counted {
                            return Err(Failure::new("coproduct dimension disagrees with enumeration")
                                .with("n", n)
                                .with("m", m)
                                .with("d", d));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn fragments(ctx: &Ctx) -> Vec<Check> {
    let mut checks = Vec::new();
    let algebras = ctx.algebras.clone();
    let small: Vec<(String, Arc<WeilAlgebra>)> =
        algebras.iter().filter(|(_, w)| w.dimension() <= 4).cloned().collect();
    let d_max = ctx.degree_bound;
    let owned = ctx.clone();
    checks.push(Check::new("fragments/eval_j", 1, move |_| eval_j_case(&owned, &algebras)));
    let x = FragmentSpace::Euclidean(1);
    for &n in &ctx.n {
        for &m in &ctx.m {
            for (a, w) in &small {
                for (b, w2) in &small {
                    for d in 0..=d_max {
                        let (x, w, w2) = (x.clone(), w.clone(), w2.clone());
                        checks.push(Check::new(format!("fragments/currying/n{n}-m{m}-{a}-{b}-d{d}"), 1, move |_| {
                            CurryIso::new(&x, &DObject::new(n, &w), &DObject::new(m, &w2), d)?.basis_round_trips()
                        }));
                    }
                }
            }
        }
    }
    let grid = Arc::new((ctx.n.clone(), ctx.m.clone(), small.clone()));
    let pick_grid = |rng: &mut ChaCha8Rng, grid: &(Vec<usize>, Vec<usize>, Vec<(String, Arc<WeilAlgebra>)>)| {
        let n = *grid.0.choose(rng).expect("grid n");
        let m = *grid.1.choose(rng).expect("grid m");
        let w = grid.2.choose(rng).expect("grid algebras").1.clone();
        let w2 = grid.2.choose(rng).expect("grid algebras").1.clone();
        (n, m, w, w2)
    };
    if !small.is_empty() && !ctx.n.is_empty() && !ctx.m.is_empty() {
        let g1 = grid.clone();
        checks.push(Check::new("fragments/currying_linear", ctx.cases, move |rng| {
            let (n, m, w, w2) = pick_grid(rng, &g1);
            let d = rng.gen_range(0..=d_max.min(2));
            let iso = CurryIso::new(&FragmentSpace::Euclidean(1), &DObject::new(n, &w), &DObject::new(m, &w2), d)?;
            iso.linear_case(rng)
        }));
        let g2 = grid.clone();
        checks.push(Check::new("fragments/currying_natural", ctx.cases, move |rng| {
            let (n, m, w, w2) = pick_grid(rng, &g2);
            let d = rng.gen_range(0..=d_max.min(2));
            let p = rng.gen_range(1..=2);
            let iso = CurryIso::new(&FragmentSpace::Euclidean(p), &DObject::new(n, &w), &DObject::new(m, &w2), d)?;
            iso.natural_case(rng)
        }));
    }
    let pairs = [(1usize, 1usize), (1, 0), (2, 1)];
    let arities: Vec<usize> = {
        let mut a: Vec<usize> = ctx.n.iter().chain(&ctx.m).copied().collect();
        a.sort_unstable();
        a.dedup();
        a
    };
    for &(p, q) in &pairs {
        for &n in &arities {
            for (a, w) in &small {
                for d in 0..=d_max {
                    let w = w.clone();
                    checks.push(Check::new(format!("fragments/products/r{p}xr{q}-n{n}-{a}-d{d}"), 1, move |_| {
                        let law = ProductLaw::new(
                            &FragmentSpace::Euclidean(p),
                            &FragmentSpace::Euclidean(q),
                            &DObject::new(n, &w),
                            d,
                        )?;
                        law.basis_case()
                    }));
                }
            }
        }
    }
    if !small.is_empty() && !arities.is_empty() {
        let small = Arc::new(small);
        checks.push(Check::new("fragments/products_maps", ctx.cases, move |rng| {
            let (p, q) = *pairs.choose(rng).expect("pairs");
            let n = *arities.choose(rng).expect("arities");
            let w = small.choose(rng).expect("algebras").1.clone();
            let d = rng.gen_range(0..=d_max);
            let law =
                ProductLaw::new(&FragmentSpace::Euclidean(p), &FragmentSpace::Euclidean(q), &DObject::new(n, &w), d)?;
            law.map_case(rng)
        }));
    }
    checks
}

// conjecture probe

fn conjecture_probe(ctx: &Ctx) -> Vec<Check> {
    let d = ctx.degree_bound;
    vec![Check::counting("conjecture_probe", ctx.cases.max(100), move |rng| {
        let x = FragmentSpace::Euclidean(rng.gen_range(1..=2));
        probe_case(rng, &x, d)
    })]
}
