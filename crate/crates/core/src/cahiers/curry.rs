use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{LiftError, ProbeError, WeilError};
use crate::poly::Monomial;
use crate::prolong::{FragmentSpace, JetRing, SmoothMap};
use crate::report::{run_cases, CheckReport, Failure};
use crate::sample;
use crate::scalar::Primitive;
use crate::weil::{tensor, Tensor, WeilAlgebra, WeilElement};
use crate::Q;

use super::fragment::FragmentElem;
use super::jspace::{eval_j, fragment_width, j_on_map, JSpace, JValue};
use super::object::{dobj_coproduct, DObject};

/// An element of `(Q[s] (x) W)[t] (x) W'`: keyed by a monomial in the outer
/// variables `t` and a basis index of `W'`, with inner fragment elements as
/// coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct CurriedElem {
    outer: DObject,
    inner: DObject,
    terms: BTreeMap<(Monomial, usize), FragmentElem>,
}

impl CurriedElem {
    pub fn zero(outer: &DObject, inner: &DObject) -> Self {
        CurriedElem { outer: outer.clone(), inner: inner.clone(), terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, usize), &FragmentElem)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (Monomial, usize), f: FragmentElem) {
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&f).expect("same inner object"),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn inner_zero(&self) -> FragmentElem {
        FragmentElem::zero(self.inner.base_arity(), self.inner.weil())
    }

    fn check(&self, other: &Self) -> Result<(), LiftError> {
        if self.outer == other.outer && self.inner == other.inner {
            Ok(())
        } else {
            Err(LiftError::Weil(WeilError::AlgebraMismatch))
        }
    }
}

impl JetRing for CurriedElem {
    fn constant_like(&self, c: &Q) -> Self {
        let mut out = CurriedElem::zero(&self.outer, &self.inner);
        let one = self.inner_zero().constant_like(c);
        out.add_term((Monomial::one(self.outer.base_arity()), 0), one);
        out
    }

    fn plus(&self, other: &Self) -> Result<Self, LiftError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_term(k.clone(), f.clone());
        }
        Ok(out)
    }

    fn minus(&self, other: &Self) -> Result<Self, LiftError> {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Result<Self, LiftError> {
        self.check(other)?;
        let table = self.outer.weil().table_q();
        let mut out = CurriedElem::zero(&self.outer, &self.inner);
        for ((m1, j1), f1) in &self.terms {
            for ((m2, j2), f2) in &other.terms {
                let entries = &table[*j1][*j2];
                if entries.is_empty() {
                    continue;
                }
                let prod = f1.mul(f2)?;
                let m = m1.mul(m2);
                for (k, c) in entries {
                    out.add_term((m.clone(), *k), prod.scale(c));
                }
            }
        }
        Ok(out)
    }

    fn negated(&self) -> Self {
        CurriedElem {
            outer: self.outer.clone(),
            inner: self.inner.clone(),
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.neg())).collect(),
        }
    }

    fn reciprocal(&self) -> Result<Self, LiftError> {
        let one = Monomial::one(self.outer.base_arity());
        match self.terms.iter().next() {
            Some(((m, 0), f)) if self.terms.len() == 1 && *m == one => {
                let mut out = CurriedElem::zero(&self.outer, &self.inner);
                out.add_term((one, 0), f.reciprocal()?);
                Ok(out)
            }
            _ => Err(LiftError::NonPolynomial("division by a non-constant element".into())),
        }
    }

    fn primitive(&self, p: Primitive) -> Result<Self, LiftError> {
        Err(LiftError::NonPolynomial(format!("{} leaves the polynomial fragment", p.name())))
    }
}

/// Regrouping `C(R^(n+m), X) (x) (W (x) W') = C(R^m, C(R^n, X) (x) W) (x) W'`
/// for `X = R^p`, at base degree `<= d` per block.
#[derive(Clone, Debug)]
pub struct CurryIso {
    inner: DObject,
    outer: DObject,
    left: JSpace,
    /// `eval_j(R^P, outer, d)` with `P = dim eval_j(X, inner, d)`.
    right: JSpace,
    /// `X (x) inner` at degree `d`, whose coordinates index the right side.
    middle: JSpace,
    tensor: Tensor,
    split: Vec<Vec<Vec<Q>>>,
}

impl CurryIso {
    pub fn new(x: &FragmentSpace, inner: &DObject, outer: &DObject, d: u32) -> Result<CurryIso, ProbeError> {
        fragment_width(x)?;
        let tensor = tensor(inner.weil(), outer.weil());
        let split = (0..tensor.algebra.dimension())
            .map(|t| tensor.split_basis(t))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ProbeError::ObjectMismatch("tensor basis does not split".into()))?;
        let left = eval_j(x, &dobj_coproduct(inner, outer), d)?;
        let middle = eval_j(x, inner, d)?;
        let right = eval_j(&FragmentSpace::Euclidean(middle.dimension()), outer, d)?;
        Ok(CurryIso { inner: inner.clone(), outer: outer.clone(), left, right, middle, tensor, split })
    }

    pub fn left(&self) -> &JSpace {
        &self.left
    }

    pub fn right(&self) -> &JSpace {
        &self.right
    }

    /// Regroup each entry of a value over the coproduct.
    pub fn curry(&self, v: &JValue) -> Result<Vec<CurriedElem>, ProbeError> {
        if v.object() != self.left.object() {
            return Err(ProbeError::ObjectMismatch("value is not over the coproduct".into()));
        }
        let n = self.inner.base_arity();
        let (d1, d2) = (self.inner.weil().dimension(), self.outer.weil().dimension());
        v.entries()
            .iter()
            .map(|e| {
                let mut out = CurriedElem::zero(&self.outer, &self.inner);
                for (m, w) in e.terms() {
                    let (ms, mt) = m.split_at(n);
                    // pair coordinates c[i][j] of the tensor coefficient
                    let mut c = vec![vec![Q::from_integer(0.into()); d2]; d1];
                    for (wt, mat) in w.coords().iter().zip(&self.split) {
                        if *wt == Q::from_integer(0.into()) {
                            continue;
                        }
                        for (i, row) in mat.iter().enumerate() {
                            for (j, x) in row.iter().enumerate() {
                                c[i][j] += wt * x;
                            }
                        }
                    }
                    for j in 0..d2 {
                        let col: Vec<Q> = (0..d1).map(|i| c[i][j].clone()).collect();
                        let inner_w = WeilElement::from_coords(self.inner.weil(), col)?;
                        if !inner_w.is_zero() {
                            out.add_term((mt.clone(), j), FragmentElem::monomial(ms.clone(), inner_w));
                        }
                    }
                }
                Ok(out)
            })
            .collect()
    }

    /// Inverse of [`CurryIso::curry`].
    pub fn uncurry(&self, parts: &[CurriedElem]) -> Result<JValue, ProbeError> {
        let obj = self.left.object();
        let alg = obj.weil();
        let entries = parts
            .iter()
            .map(|c| {
                let mut e = FragmentElem::zero(obj.base_arity(), alg);
                for ((mt, j), f) in c.terms() {
                    for (ms, w) in f.terms() {
                        let mut coords = vec![Q::from_integer(0.into()); alg.dimension()];
                        for (i, wi) in w.coords().iter().enumerate() {
                            for (slot, x) in coords.iter_mut().zip(self.tensor.pair_image(i, *j)) {
                                *slot += wi * x;
                            }
                        }
                        e.add_term(ms.concat(mt), WeilElement::from_coords(alg, coords)?);
                    }
                }
                Ok(e)
            })
            .collect::<Result<Vec<_>, ProbeError>>()?;
        JValue::new(obj, self.left.space(), entries)
    }

    /// Read curried entries as a point of `J(X (x) inner)(outer)`: one
    /// outer fragment element per coordinate of the inner carrier.
    pub fn to_fragment(&self, parts: &[CurriedElem]) -> Result<JValue, ProbeError> {
        let m = self.outer.base_arity();
        let mut entries = vec![FragmentElem::zero(m, self.outer.weil()); self.middle.dimension()];
        for (r, c) in parts.iter().enumerate() {
            for ((mt, j), f) in c.terms() {
                let mut single = vec![FragmentElem::zero(self.inner.base_arity(), self.inner.weil()); parts.len()];
                single[r] = f.clone();
                let inner_value = JValue::new(&self.inner, self.middle.space(), single)?;
                for (idx, q) in self.middle.coords(&inner_value)?.into_iter().enumerate() {
                    if q == Q::from_integer(0.into()) {
                        continue;
                    }
                    let mut w = vec![Q::from_integer(0.into()); self.outer.weil().dimension()];
                    w[*j] = q;
                    entries[idx].add_term(mt.clone(), WeilElement::from_coords(self.outer.weil(), w)?);
                }
            }
        }
        JValue::new(&self.outer, self.right.space(), entries)
    }

    /// Inverse of [`CurryIso::to_fragment`].
    pub fn from_fragment(&self, v: &JValue) -> Result<Vec<CurriedElem>, ProbeError> {
        let p = self.middle.width();
        let mut out = vec![CurriedElem::zero(&self.outer, &self.inner); p];
        for (idx, e) in v.entries().iter().enumerate() {
            let basis = self.middle.basis_vector(idx);
            let (r, _, _) = self.middle.locate(idx);
            let f = &basis.entries()[r];
            for (mt, w) in e.terms() {
                for (j, q) in w.coords().iter().enumerate() {
                    if *q != Q::from_integer(0.into()) {
                        out[r].add_term((mt.clone(), j), f.scale(q));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Left value to right-carrier coordinates.
    pub fn forward_coords(&self, v: &JValue) -> Result<Vec<Q>, ProbeError> {
        self.right.coords(&self.to_fragment(&self.curry(v)?)?)
    }

    /// Right-carrier coordinates to a left value.
    pub fn backward_coords(&self, c: &[Q]) -> Result<JValue, ProbeError> {
        self.uncurry(&self.from_fragment(&self.right.from_coords(c)?)?)
    }

    /// Dimensions agree with the formula, and both bases round-trip.
    pub fn basis_round_trips(&self) -> Result<(), Failure> {
        let (dl, dr) = (self.left.dimension(), self.right.dimension());
        if dl != dr || dl as u64 != self.left.dimension_formula() {
            return Err(Failure::new("carrier dimensions differ").with("left", dl).with("right", dr));
        }
        for k in 0..dl {
            let b = self.left.basis_vector(k);
            if self.backward_coords(&self.forward_coords(&b)?)? != b {
                return Err(Failure::new("left basis vector does not round-trip").with("index", k));
            }
        }
        for k in 0..dr {
            let mut unit = vec![Q::from_integer(0.into()); dr];
            unit[k] = Q::from_integer(1.into());
            if self.forward_coords(&self.backward_coords(&unit)?)? != unit {
                return Err(Failure::new("right basis vector does not round-trip").with("index", k));
            }
        }
        Ok(())
    }

    /// Linearity on a random pair and scalar.
    pub fn linear_case<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), Failure> {
        let a = self.left.sample(rng);
        let b = self.left.sample(rng);
        let q = sample::rational(rng);
        let (ca, cb) = (self.left.coords(&a)?, self.left.coords(&b)?);
        let combo: Vec<Q> = ca.iter().zip(&cb).map(|(x, y)| x + &q * y).collect();
        let lhs = self.forward_coords(&self.left.from_coords(&combo)?)?;
        let (fa, fb) = (self.forward_coords(&a)?, self.forward_coords(&b)?);
        let rhs: Vec<Q> = fa.iter().zip(&fb).map(|(x, y)| x + &q * y).collect();
        if lhs == rhs {
            Ok(())
        } else {
            Err(Failure::new("regrouping is not linear"))
        }
    }

    /// `curry(J(phi)(v)) = phi(curry(v))` for a random polynomial `phi` out
    /// of `X` and a random carrier value `v`.
    pub fn natural_case<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), Failure> {
        let q = rng.gen_range(1..=2);
        let phi = random_poly_map(rng, self.left.width(), q);
        let v = self.left.sample(rng);
        let lhs = self.curry(&j_on_map(&phi, self.left.object())?.apply(&v)?)?;
        let curried = self.curry(&v)?;
        let template = CurriedElem::zero(&self.outer, &self.inner);
        let rhs = phi.eval(&curried, &template)?;
        if lhs == rhs {
            Ok(())
        } else {
            Err(Failure::new("regrouping does not commute with J(phi)").with("phi", &phi))
        }
    }

    /// Exhaustive round trips on both bases and linearity on random pairs.
    pub fn verify(&self, samples: usize, seed: u64) -> CheckReport {
        let mut report = CheckReport::new("curry_iso");
        report.record(0, seed, self.basis_round_trips());
        report.absorb(run_cases("curry_iso/linear", seed, samples, |rng| self.linear_case(rng)));
        report
    }
}

/// Build and verify the regrouping for `X = R^p`.
pub fn curry_iso(
    p: usize,
    n: usize,
    m: usize,
    w: &Arc<WeilAlgebra>,
    w2: &Arc<WeilAlgebra>,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<(CurryIso, CheckReport), ProbeError> {
    let iso = CurryIso::new(&FragmentSpace::Euclidean(p), &DObject::new(n, w), &DObject::new(m, w2), d)?;
    let report = iso.verify(samples, seed);
    Ok((iso, report))
}

/// Composing fragment values with high-degree maps blows up the term count
/// without exercising anything new, so the maps stay at modest degree.
const MAX_MAP_DEGREE: u32 = 4;

fn random_poly_map<R: Rng + ?Sized>(rng: &mut R, arity: usize, coarity: usize) -> SmoothMap {
    let outputs = (0..coarity)
        .map(|_| loop {
            let e = sample::poly_expr(rng, arity, 2);
            if e.degree().is_some_and(|d| d <= MAX_MAP_DEGREE) {
                break e;
            }
        })
        .collect();
    SmoothMap::new(arity, outputs).expect("variables drawn below arity")
}

/// `J(X)` at a coproduct agrees with `J(X (x) C1)` at `C2` through the
/// regrouping, naturally in polynomial maps `X -> Y`.
pub fn check_j_currying(
    x: &FragmentSpace,
    c1: &DObject,
    c2: &DObject,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, ProbeError> {
    let iso = CurryIso::new(x, c1, c2, d)?;
    let mut report = iso.verify(samples.min(20), seed);
    report.name = "j_currying".into();
    report.absorb(run_cases("j_currying/natural", seed, samples, |rng| iso.natural_case(rng)));
    Ok(report)
}

/// `J(X x Y) = J(X) x J(Y)` on carriers, compatible with projections and
/// with pairing of polynomial maps.
pub fn check_j_products(
    x: &FragmentSpace,
    y: &FragmentSpace,
    c: &DObject,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, ProbeError> {
    let law = ProductLaw::new(x, y, c, d)?;
    let mut report = CheckReport::new("j_products");
    report.record(0, seed, law.basis_case());
    report.absorb(run_cases("j_products/maps", seed, samples, |rng| law.map_case(rng)));
    Ok(report)
}

/// Carriers of `J(X)`, `J(Y)` and `J(X x Y)` at one object and degree.
#[derive(Clone, Debug)]
pub struct ProductLaw {
    jx: JSpace,
    jy: JSpace,
    jxy: JSpace,
}

impl ProductLaw {
    pub fn new(x: &FragmentSpace, y: &FragmentSpace, c: &DObject, d: u32) -> Result<ProductLaw, ProbeError> {
        let xy = FragmentSpace::Product(vec![x.clone(), y.clone()]);
        Ok(ProductLaw { jx: eval_j(x, c, d)?, jy: eval_j(y, c, d)?, jxy: eval_j(&xy, c, d)? })
    }

    /// Splitting is a bijection matching coordinates, inverted by pairing,
    /// and it agrees with `J` of the two projections; checked on every
    /// basis vector.
    pub fn basis_case(&self) -> Result<(), Failure> {
        let (jx, jy, jxy) = (&self.jx, &self.jy, &self.jxy);
        let c = jxy.object();
        let (px, py) = (jx.width(), jy.width());
        if jxy.dimension() != jx.dimension() + jy.dimension() {
            return Err(Failure::new("carrier dimensions do not add")
                .with("product", jxy.dimension())
                .with("factors", jx.dimension() + jy.dimension()));
        }
        let pi1 = j_on_map(&SmoothMap::projection(px + py, 0..px), c)?;
        let pi2 = j_on_map(&SmoothMap::projection(px + py, px..px + py), c)?;
        for k in 0..jxy.dimension() {
            let b = jxy.basis_vector(k);
            let parts = b.split()?;
            let mut joined = jx.coords(&parts[0])?;
            joined.extend(jy.coords(&parts[1])?);
            if joined != jxy.coords(&b)? {
                return Err(Failure::new("splitting does not match coordinates").with("index", k));
            }
            if JValue::pair(&parts)? != b {
                return Err(Failure::new("pairing does not invert splitting").with("index", k));
            }
            if pi1.apply(&b)?.entries() != parts[0].entries() || pi2.apply(&b)?.entries() != parts[1].entries() {
                return Err(Failure::new("projections do not commute with splitting").with("index", k));
            }
        }
        Ok(())
    }

    /// `J(f) = (J(pi1 o f), J(pi2 o f))` for a random polynomial `f` into
    /// the product, at a random value.
    pub fn map_case<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), Failure> {
        let c = self.jxy.object();
        let d = self.jxy.degree_bound();
        let (px, py) = (self.jx.width(), self.jy.width());
        let r = rng.gen_range(1..=2);
        let f = random_poly_map(rng, r, px + py);
        let z = eval_j(&FragmentSpace::Euclidean(r), c, d)?;
        let v = z.sample(rng);
        let whole = j_on_map(&f, c)?.apply(&v)?;
        let first = j_on_map(&f.select(0..px), c)?.apply(&v)?;
        let second = j_on_map(&f.select(px..px + py), c)?.apply(&v)?;
        let (a, b) = whole.entries().split_at(px);
        if a == first.entries() && b == second.entries() {
            Ok(())
        } else {
            Err(Failure::new("J of a map into a product is not the pair of components").with("f", &f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_regrouping() {
        let r = WeilAlgebra::real();
        let (iso, report) = curry_iso(1, 1, 1, &r, &r, 1, 5, 0).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(iso.left().dimension(), 4);
        // s0*s1 (s inner, t outer) goes to the entry of s with coefficient t
        let s = FragmentElem::base_var(2, iso.left().object().weil(), 0);
        let t = FragmentElem::base_var(2, iso.left().object().weil(), 1);
        let v = JValue::new(iso.left().object(), iso.left().space(), vec![s.mul(&t).unwrap()]).unwrap();
        let frag = iso.to_fragment(&iso.curry(&v).unwrap()).unwrap();
        // inner carrier basis (1, s): the s-entry holds t
        assert!(frag.entries()[0].is_zero());
        assert_eq!(frag.entries()[1], FragmentElem::base_var(1, &r, 0));
    }

    #[test]
    fn dual_dual_has_36_dimensions() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let (iso, report) = curry_iso(1, 1, 1, &d, &d, 2, 5, 0).unwrap();
        assert_eq!((iso.left().dimension(), iso.right().dimension()), (36, 36));
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn point_factor_is_identity() {
        let w = WeilAlgebra::jet(2);
        let c2 = DObject::new(1, &w);
        let point = DObject::new(0, &WeilAlgebra::real());
        let iso = CurryIso::new(&FragmentSpace::Euclidean(2), &point, &c2, 2).unwrap();
        let mut rng = crate::report::case_rng(1);
        let v = iso.left().sample(&mut rng);
        let frag = iso.to_fragment(&iso.curry(&v).unwrap()).unwrap();
        assert_eq!(frag.entries(), v.entries());
    }

    #[test]
    fn currying_and_products_hold() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let c = DObject::new(1, &d);
        let r1 = FragmentSpace::Euclidean(1);
        let rep = check_j_currying(&r1, &c, &c, 2, 20, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let rep = check_j_products(&r1, &r1, &c, 1, 20, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(eval_j(&FragmentSpace::Product(vec![r1.clone(), r1.clone()]), &c, 1).unwrap().dimension(), 8);
        let rep = check_j_products(&r1, &FragmentSpace::Euclidean(0), &c, 1, 10, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }
}
