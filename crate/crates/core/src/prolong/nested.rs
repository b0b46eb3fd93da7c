use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::error::{LiftError, WeilError};
use crate::report::{run_cases, CheckReport, Failure};
use crate::sample;
use crate::scalar::{Primitive, Scalar};
use crate::weil::{tensor, Tensor, WeilAlgebra, WeilElement};
use crate::Q;

use super::expr::SmoothMap;
use super::lift::taylor_lift;
use super::ring::{apply_series, series_in_ring, JetRing, Nilpotent};

/// An element of `W1` whose coefficients lie in `W2`: a point of
/// `(R (x) W1) (x) W2` before identification with the tensor algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedElement<S: Scalar> {
    outer: Arc<WeilAlgebra>,
    coords: Vec<WeilElement<S>>,
}

impl<S: Scalar> NestedElement<S> {
    pub fn new(outer: &Arc<WeilAlgebra>, coords: Vec<WeilElement<S>>) -> Result<Self, WeilError> {
        if coords.len() != outer.dimension() {
            return Err(WeilError::CoordinateCount { expected: outer.dimension(), got: coords.len() });
        }
        if coords.windows(2).any(|w| !WeilAlgebra::same(w[0].algebra(), w[1].algebra())) {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(NestedElement { outer: outer.clone(), coords })
    }

    fn inner(&self) -> &Arc<WeilAlgebra> {
        self.coords[0].algebra()
    }

    pub fn outer(&self) -> &Arc<WeilAlgebra> {
        &self.outer
    }

    pub fn coords(&self) -> &[WeilElement<S>] {
        &self.coords
    }

    fn constant(&self, c: WeilElement<S>) -> Self {
        let mut coords = vec![WeilElement::zero(self.inner()); self.coords.len()];
        coords[0] = c;
        NestedElement { outer: self.outer.clone(), coords }
    }

    fn scale_inner(&self, c: &WeilElement<S>) -> Result<Self, LiftError> {
        let coords = self.coords.iter().map(|a| a.mul(c)).collect::<Result<_, _>>()?;
        Ok(NestedElement { outer: self.outer.clone(), coords })
    }

    fn zip(&self, other: &Self, f: impl Fn(&WeilElement<S>, &WeilElement<S>) -> Result<WeilElement<S>, WeilError>) -> Result<Self, LiftError> {
        if !WeilAlgebra::same(&self.outer, &other.outer) {
            return Err(LiftError::Weil(WeilError::AlgebraMismatch));
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect::<Result<_, _>>()?;
        Ok(NestedElement { outer: self.outer.clone(), coords })
    }

    fn nilpotent_part(&self) -> Self {
        let mut e = self.clone();
        e.coords[0] = WeilElement::zero(self.inner());
        e
    }
}

impl<S: Scalar> Nilpotent for NestedElement<S> {
    fn vanishes(&self) -> bool {
        self.coords.iter().all(WeilElement::is_zero)
    }
}

impl<S: Scalar> JetRing for NestedElement<S> {
    fn constant_like(&self, c: &Q) -> Self {
        self.constant(WeilElement::constant(self.inner(), S::from_rational(c)))
    }

    fn plus(&self, other: &Self) -> Result<Self, LiftError> {
        self.zip(other, WeilElement::add)
    }

    fn minus(&self, other: &Self) -> Result<Self, LiftError> {
        self.zip(other, WeilElement::sub)
    }

    fn times(&self, other: &Self) -> Result<Self, LiftError> {
        if !WeilAlgebra::same(&self.outer, &other.outer) {
            return Err(LiftError::Weil(WeilError::AlgebraMismatch));
        }
        let table = S::structure_constants(&self.outer);
        let mut out = vec![WeilElement::zero(self.inner()); self.coords.len()];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() || table[i][j].is_empty() {
                    continue;
                }
                let ab = a.mul(b)?;
                for (k, c) in &table[i][j] {
                    out[*k] = out[*k].add(&ab.scale(c))?;
                }
            }
        }
        Ok(NestedElement { outer: self.outer.clone(), coords: out })
    }

    fn negated(&self) -> Self {
        NestedElement { outer: self.outer.clone(), coords: self.coords.iter().map(WeilElement::neg).collect() }
    }

    fn reciprocal(&self) -> Result<Self, LiftError> {
        let inv0 = self.coords[0].reciprocal()?;
        // (a0 + n)^-1 = inv0 * sum_j (-n * inv0)^j
        let q = self.nilpotent_part().scale_inner(&inv0.neg())?;
        let mut term = self.constant_like(&Q::from_integer(1.into()));
        let mut acc = term.clone();
        loop {
            term = term.times(&q)?;
            if term.vanishes() {
                break;
            }
            acc = acc.plus(&term)?;
        }
        acc.scale_inner(&inv0)
    }

    fn primitive(&self, p: Primitive) -> Result<Self, LiftError> {
        let len = self.outer.nilpotency_order() as usize;
        let series = series_in_ring(p, &self.coords[0], len)?;
        let coeffs: Vec<Self> = series.into_iter().map(|c| self.constant(c)).collect();
        apply_series(&coeffs, &self.nilpotent_part())
    }
}

/// The identification `(X (x) W1) (x) W2 = X (x) (W1 (x) W2)` for
/// `X = R^m`, by reindexing coefficients through the product basis.
#[derive(Clone, Debug)]
pub struct AssocIso {
    m: usize,
    tensor: Tensor,
    /// For each tensor basis vector, its product-basis coordinates.
    split: Option<Vec<Vec<Vec<Q>>>>,
}

impl AssocIso {
    pub fn new(m: usize, w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> AssocIso {
        let tensor = tensor(w1, w2);
        let split = (0..tensor.algebra.dimension()).map(|t| tensor.split_basis(t)).collect();
        AssocIso { m, tensor, split }
    }

    pub fn components(&self) -> usize {
        self.m
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn is_bijective(&self) -> bool {
        self.split.is_some()
    }

    /// Nested element to the tensor algebra.
    pub fn forward<S: Scalar>(&self, a: &NestedElement<S>) -> Result<WeilElement<S>, WeilError> {
        let t = &self.tensor;
        if !WeilAlgebra::same(&a.outer, &t.left) || !WeilAlgebra::same(a.inner(), &t.right) {
            return Err(WeilError::AlgebraMismatch);
        }
        let mut out = vec![S::zero(); t.algebra.dimension()];
        for (i, ai) in a.coords.iter().enumerate() {
            for (j, aij) in ai.coords().iter().enumerate() {
                if aij.is_zero() {
                    continue;
                }
                for (slot, c) in out.iter_mut().zip(t.pair_image(i, j)) {
                    if !c.is_zero() {
                        *slot = slot.plus(&aij.times(&S::from_rational(c)));
                    }
                }
            }
        }
        WeilElement::from_coords(&t.algebra, out)
    }

    /// Tensor-algebra element back to a nested element.
    pub fn backward<S: Scalar>(&self, e: &WeilElement<S>) -> Result<NestedElement<S>, WeilError> {
        let t = &self.tensor;
        if !WeilAlgebra::same(e.algebra(), &t.algebra) {
            return Err(WeilError::AlgebraMismatch);
        }
        let split = self.split.as_ref().ok_or(WeilError::NotInvertible)?;
        let (d1, d2) = (t.left.dimension(), t.right.dimension());
        let mut coords = vec![vec![S::zero(); d2]; d1];
        for (et, mat) in e.coords().iter().zip(split) {
            if et.is_zero() {
                continue;
            }
            for (i, row) in mat.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        coords[i][j] = coords[i][j].plus(&et.times(&S::from_rational(c)));
                    }
                }
            }
        }
        let coords = coords
            .into_iter()
            .map(|c| WeilElement::from_coords(&t.right, c))
            .collect::<Result<Vec<_>, _>>()?;
        NestedElement::new(&t.left, coords)
    }

    /// Lift `f` through `W1` with `W2`-valued coefficients.
    pub fn lift_nested<S: Scalar>(
        &self,
        f: &SmoothMap,
        point: &[NestedElement<S>],
    ) -> Result<Vec<NestedElement<S>>, LiftError> {
        let template = point
            .first()
            .map(|p| p.constant_like(&Q::zero()))
            .ok_or_else(|| LiftError::Shape("empty point".into()))?;
        f.eval(point, &template)
    }

    /// Random nested element.
    pub fn sample<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> NestedElement<S> {
        let t = &self.tensor;
        let coords = (0..t.left.dimension()).map(|_| sample::element(rng, &t.right)).collect();
        NestedElement::new(&t.left, coords).expect("shapes agree")
    }

    /// Basis bijectivity, additivity, multiplicativity, augmentation, and
    /// lift coherence against the listed expressions (each of arity `m`).
    pub fn verify(&self, exprs: &[SmoothMap], samples: usize, seed: u64) -> CheckReport {
        let mut report = CheckReport::new("assoc_iso");
        let basis_ok = self.check_basis();
        report.record(0, seed, basis_ok);
        let algebra_laws = run_cases("assoc_iso/laws", seed, samples, |rng| self.laws_case(rng));
        report.absorb(algebra_laws);
        for (idx, f) in exprs.iter().enumerate() {
            let name = format!("assoc_iso/lift/{idx}");
            let r = run_cases(&name, seed, samples.max(1), |rng| self.lift_case(f, rng));
            report.absorb(r);
        }
        report
    }

    /// Every product-basis vector maps to the corresponding tensor
    /// coordinates, and the two maps are mutually inverse on bases.
    pub fn check_basis(&self) -> Result<(), Failure> {
        let t = &self.tensor;
        if !self.is_bijective() {
            return Err(Failure::new("pair map is not a bijection onto the tensor basis")
                .with("rank", t.pair_rank())
                .with("tensor_dim", t.algebra.dimension()));
        }
        let (d1, d2) = (t.left.dimension(), t.right.dimension());
        for i in 0..d1 {
            for j in 0..d2 {
                let mut coords = vec![WeilElement::<Q>::zero(&t.right); d1];
                coords[i] = WeilElement::from_coords(&t.right, unit(d2, j))?;
                let nested = NestedElement::new(&t.left, coords)?;
                let there = self.forward(&nested)?;
                if there.coords() != t.pair_image(i, j) {
                    return Err(Failure::new("forward disagrees with the pair map").with("i", i).with("j", j));
                }
                if self.backward(&there)? != nested {
                    return Err(Failure::new("backward does not invert forward").with("i", i).with("j", j));
                }
            }
        }
        for s in 0..t.algebra.dimension() {
            let e = WeilElement::<Q>::from_coords(&t.algebra, unit(t.algebra.dimension(), s))?;
            if self.forward(&self.backward(&e)?)? != e {
                return Err(Failure::new("forward does not invert backward").with("basis", s));
            }
        }
        Ok(())
    }

    /// Additivity, multiplicativity, augmentation and inversion on a random pair.
    pub fn laws_case<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), Failure> {
        let a = self.sample::<Q, R>(rng);
        let b = self.sample::<Q, R>(rng);
        let (fa, fb) = (self.forward(&a)?, self.forward(&b)?);
        if self.forward(&a.plus(&b)?)? != fa.add(&fb)? {
            return Err(Failure::new("forward is not additive").with("a", fa).with("b", fb));
        }
        if self.forward(&a.times(&b)?)? != fa.mul(&fb)? {
            return Err(Failure::new("forward is not multiplicative").with("a", fa).with("b", fb));
        }
        if a.coords[0].augmentation() != fa.augmentation() {
            return Err(Failure::new("augmentation not preserved").with("a", fa));
        }
        if self.backward(&fa)? != a {
            return Err(Failure::new("backward does not invert forward").with("a", fa));
        }
        Ok(())
    }

    /// Double lift against the lift through the tensor at a random point.
    pub fn lift_case<R: Rng + ?Sized>(&self, f: &SmoothMap, rng: &mut R) -> Result<(), Failure> {
        let point: Vec<NestedElement<Q>> = (0..f.arity()).map(|_| self.sample(rng)).collect();
        let twice = self.lift_nested(f, &point)?;
        let image: Vec<WeilElement<Q>> = point.iter().map(|p| self.forward(p)).collect::<Result<_, _>>()?;
        let once = taylor_lift(f, &self.tensor.algebra, &image)?;
        for (c, (a, b)) in twice.iter().zip(&once).enumerate() {
            let a = self.forward(a)?;
            if &a != b {
                return Err(Failure::new("lift through the tensor disagrees with the double lift")
                    .with("expr", f)
                    .with("component", c)
                    .with("double", a)
                    .with("tensor", b));
            }
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::from_integer(1.into());
    v
}

/// Construct the identification and verify it.
pub fn assoc_iso(
    m: usize,
    w1: &Arc<WeilAlgebra>,
    w2: &Arc<WeilAlgebra>,
    exprs: &[SmoothMap],
    samples: usize,
    seed: u64,
) -> (AssocIso, CheckReport) {
    let iso = AssocIso::new(m, w1, w2);
    let report = iso.verify(exprs, samples, seed);
    (iso, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::parse_map;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn dual_dual_basis() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let iso = AssocIso::new(1, &d, &d);
        assert_eq!(iso.tensor().algebra.dimension(), 4);
        assert!(iso.check_basis().is_ok());
    }

    #[test]
    fn unit_law() {
        let d = WeilAlgebra::jet(2);
        let iso = AssocIso::new(1, &d, &WeilAlgebra::real());
        assert!(WeilAlgebra::same(&iso.tensor().algebra, &d));
        assert!(iso.check_basis().is_ok());
    }

    #[test]
    fn cube_cross_term() {
        // (a + b x) with coefficients a = a0 + c y, b = b0 over the second dual
        let d = WeilAlgebra::preset("dual").unwrap();
        let iso = AssocIso::new(1, &d, &d);
        let (a, b, c) = (q(2), q(3), q(5));
        let coords = vec![
            WeilElement::<Q>::from_coords(&d, vec![a.clone(), c.clone()]).unwrap(),
            WeilElement::<Q>::from_coords(&d, vec![b.clone(), q(0)]).unwrap(),
        ];
        let p = NestedElement::new(&d, coords).unwrap();
        let f = parse_map("t^3", None).unwrap();
        let twice = iso.forward(&iso.lift_nested(&f, std::slice::from_ref(&p)).unwrap()[0]).unwrap();
        let once = taylor_lift(&f, &iso.tensor().algebra, &[iso.forward(&p).unwrap()]).unwrap();
        assert_eq!(twice, once[0]);
        // coefficient of x*x_2 is 6 a b c
        let xy = iso.tensor().algebra.basis_display().iter().position(|s| s == "x*x_2").unwrap();
        assert_eq!(twice.coords()[xy], q(6) * &a * &b * &c);
    }

    #[test]
    fn verify_reports_pass() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let j = WeilAlgebra::jet(2);
        let exprs = vec![parse_map("t^3 - 2*t", None).unwrap(), parse_map("(t + 1)^4", None).unwrap()];
        let (_, report) = assoc_iso(1, &d, &j, &exprs, 10, 1);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn transcendental_double_lift_in_real_mode() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let j = WeilAlgebra::jet(2);
        let iso = AssocIso::new(1, &d, &j);
        let mut rng = crate::report::case_rng(4);
        let f = parse_map("sin(t)*exp(t)/(1 + t^2) + sqrt(2 + t) + log(3 + t^2)", None).unwrap();
        let p = iso.sample::<f64, _>(&mut rng);
        let twice = iso.forward(&iso.lift_nested(&f, std::slice::from_ref(&p)).unwrap()[0]).unwrap();
        let once = taylor_lift(&f, &iso.tensor().algebra, &[iso.forward(&p).unwrap()]).unwrap();
        assert!(twice.close_to(&once[0], crate::Tolerance::default()), "{twice} vs {}", once[0]);
    }
}
