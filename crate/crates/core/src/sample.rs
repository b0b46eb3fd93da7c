//! Seeded random generators for rationals, Weil elements and algebras,
//! morphisms, and expressions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::poly::{monomials_below, Monomial, Polynomial};
use crate::prolong::Expr;
use crate::scalar::{Primitive, Scalar};
use crate::weil::{WeilAlgebra, WeilElement, WeilMorphism};
use crate::Q;

/// Small rational `n/d` with `|n| <= 6`, `1 <= d <= 4`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    Q::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into())
}

fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let q = rational(rng);
        if q != Q::from_integer(0.into()) {
            return q;
        }
    }
}

/// Element with random coordinates; about a third of them zero.
pub fn element<S: Scalar, R: Rng + ?Sized>(rng: &mut R, w: &Arc<WeilAlgebra>) -> WeilElement<S> {
    let coords = (0..w.dimension())
        .map(|_| if rng.gen_bool(0.3) { S::zero() } else { S::from_rational(&rational(rng)) })
        .collect();
    WeilElement::from_coords(w, coords).expect("dimension matches")
}

/// Element with a prescribed augmentation.
pub fn element_at<S: Scalar, R: Rng + ?Sized>(rng: &mut R, w: &Arc<WeilAlgebra>, a0: &Q) -> WeilElement<S> {
    let e = element::<S, R>(rng, w).nilpotent_part();
    e.add(&WeilElement::constant(w, S::from_rational(a0))).expect("same algebra")
}

/// Random polynomial in `n` variables with terms of degree in `lo..hi`.
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: u32, hi: u32, terms: usize) -> Polynomial {
    let pool: Vec<Monomial> = monomials_below(n, hi).into_iter().filter(|m| m.degree() >= lo).collect();
    let mut p = Polynomial::zero(n);
    if pool.is_empty() {
        return p;
    }
    for _ in 0..terms {
        let m = pool.choose(rng).unwrap().clone();
        p.add_term(m, nonzero_rational(rng));
    }
    p
}

/// Random proper Weil algebra with dimension at most `max_dim`.
pub fn algebra<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> Arc<WeilAlgebra> {
    loop {
        let n = rng.gen_range(1..=3usize);
        let k = rng.gen_range(2..=if n == 1 { 8 } else { 5 });
        let names: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(0..=n) {
            let g = match rng.gen_range(0..3) {
                // monomial relation
                0 => polynomial(rng, n, 2, k, 1),
                // binomial x^a - c y^b style relation
                1 => polynomial(rng, n, 2, k, 2),
                _ => polynomial(rng, n, 2, k.max(3), 3),
            };
            if !g.is_zero() {
                gens.push(g);
            }
        }
        if let Ok(w) = WeilAlgebra::new(names, gens, k) {
            if w.dimension() <= max_dim {
                return w;
            }
        }
    }
}

/// Lowest total degree appearing in a nonzero polynomial.
fn order(p: &Polynomial) -> u32 {
    p.terms().map(|(m, _)| m.degree()).min().unwrap_or(u32::MAX)
}

/// Random morphism `source -> target`. Images are drawn from a power of the
/// target's maximal ideal; when a draw violates the ideal condition, a
/// deeper power is used, down to the zero morphism.
pub fn morphism<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<WeilAlgebra>,
    target: &Arc<WeilAlgebra>,
) -> WeilMorphism {
    let kt = target.nilpotency_order();
    let min_order = source.full_relations().iter().map(order).min().unwrap_or(u32::MAX).max(1);
    // images in m^r send every relation into m^(r * min_order)
    let safe = kt.div_ceil(min_order).max(1);
    let mut r = rng.gen_range(1..=safe);
    loop {
        if r >= kt {
            return WeilMorphism::zero(source, target);
        }
        for _ in 0..4 {
            let psibar: Vec<Polynomial> = (0..source.nvars())
                .map(|_| {
                    let terms = rng.gen_range(1..=3);
                    polynomial(rng, target.nvars(), r, kt, terms)
                })
                .collect();
            if let Ok(m) = WeilMorphism::new(source, target, psibar) {
                return m;
            }
        }
        r += 1;
    }
}

/// Random polynomial expression tree in `arity` variables.
pub fn poly_expr<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) && arity > 0 {
            Expr::Var(rng.gen_range(0..arity))
        } else {
            Expr::Const(rational(rng))
        };
    }
    let a = poly_expr(rng, arity, depth - 1);
    match rng.gen_range(0..5) {
        0 => Expr::Add(Box::new(a), Box::new(poly_expr(rng, arity, depth - 1))),
        1 => Expr::Sub(Box::new(a), Box::new(poly_expr(rng, arity, depth - 1))),
        2 | 3 => Expr::Mul(Box::new(a), Box::new(poly_expr(rng, arity, depth - 1))),
        _ => Expr::Pow(Box::new(a), rng.gen_range(2..=3)),
    }
}

/// Random expression that may use primitives and division, built so that
/// every guard holds on all real inputs.
pub fn smooth_expr<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return poly_expr(rng, arity, 1);
    }
    let a = smooth_expr(rng, arity, depth - 1);
    let positive = |e: Expr| Expr::Add(Box::new(Expr::int(1)), Box::new(Expr::Pow(Box::new(e), 2)));
    match rng.gen_range(0..8) {
        0 => Expr::Add(Box::new(a), Box::new(smooth_expr(rng, arity, depth - 1))),
        1 => Expr::Mul(Box::new(a), Box::new(smooth_expr(rng, arity, depth - 1))),
        2 => Expr::Call(Primitive::Sin, Box::new(a)),
        3 => Expr::Call(Primitive::Cos, Box::new(a)),
        4 => Expr::Call(Primitive::Exp, Box::new(Expr::Call(Primitive::Sin, Box::new(a)))),
        5 => Expr::Call(Primitive::Log, Box::new(positive(a))),
        6 => Expr::Call(Primitive::Sqrt, Box::new(positive(a))),
        _ => Expr::Div(Box::new(smooth_expr(rng, arity, depth - 1)), Box::new(positive(a))),
    }
}
