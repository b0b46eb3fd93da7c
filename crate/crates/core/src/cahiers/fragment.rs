use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{LiftError, WeilError};
use crate::poly::{Monomial, Polynomial};
use crate::prolong::{JetRing, Nilpotent};
use crate::scalar::Primitive;
use crate::weil::{WeilAlgebra, WeilElement};
use crate::Q;

/// A polynomial in `n` base variables with coefficients in `W`: an element
/// of the polynomial fragment of `C^inf(R^n) (x) W`. Base degrees are never
/// truncated.
#[derive(Clone, PartialEq)]
pub struct FragmentElem {
    nvars: usize,
    algebra: Arc<WeilAlgebra>,
    terms: BTreeMap<Monomial, WeilElement<Q>>,
}

impl FragmentElem {
    pub fn zero(nvars: usize, algebra: &Arc<WeilAlgebra>) -> Self {
        FragmentElem { nvars, algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, w: WeilElement<Q>) -> Self {
        let mut e = Self::zero(nvars, w.algebra());
        e.add_term(Monomial::one(nvars), w);
        e
    }

    /// Base coordinate `s_i`.
    pub fn base_var(nvars: usize, algebra: &Arc<WeilAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(nvars, algebra);
        e.add_term(Monomial::var(nvars, i), WeilElement::one(algebra));
        e
    }

    /// Weil variable `x_j` as a constant in the base variables.
    pub fn weil_var(nvars: usize, algebra: &Arc<WeilAlgebra>, j: usize) -> Self {
        Self::constant(nvars, WeilElement::variable(algebra, j))
    }

    pub fn monomial(m: Monomial, w: WeilElement<Q>) -> Self {
        let mut e = Self::zero(m.nvars(), w.algebra());
        e.add_term(m, w);
        e
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &WeilElement<Q>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> WeilElement<Q> {
        self.terms.get(m).cloned().unwrap_or_else(|| WeilElement::zero(&self.algebra))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, w: WeilElement<Q>) {
        debug_assert_eq!(m.nvars(), self.nvars);
        let sum = match self.terms.remove(&m) {
            Some(old) => old.add(&w).expect("same algebra"),
            None => w,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    fn check(&self, other: &Self) -> Result<(), WeilError> {
        if self.nvars == other.nvars && WeilAlgebra::same(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(WeilError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeilError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, w) in &other.terms {
            out.add_term(m.clone(), w.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        FragmentElem {
            nvars: self.nvars,
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, w)| (m.clone(), w.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeilError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, WeilError> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars, &self.algebra);
        for (m1, w1) in &self.terms {
            for (m2, w2) in &other.terms {
                out.add_term(m1.mul(m2), w1.mul(w2)?);
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by `w`.
    pub fn scale_weil(&self, w: &WeilElement<Q>) -> Result<Self, WeilError> {
        let mut out = Self::zero(self.nvars, &self.algebra);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(w)?);
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Q) -> Self {
        let mut out = Self::zero(self.nvars, &self.algebra);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(q));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Self, WeilError> {
        let mut acc = Self::constant(self.nvars, WeilElement::one(&self.algebra));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitute `base[i]` for `s_i` and `weil[j]` for `x_j`, evaluated in
    /// the ring `(tn, ta)` of the images. Weil coefficients are expanded
    /// through their canonical polynomial representatives.
    pub fn substitute(
        &self,
        tn: usize,
        ta: &Arc<WeilAlgebra>,
        base: &[FragmentElem],
        weil: &[FragmentElem],
    ) -> Result<FragmentElem, WeilError> {
        if base.len() != self.nvars {
            return Err(WeilError::ComponentCount { expected: self.nvars, got: base.len() });
        }
        if weil.len() != self.algebra.nvars() {
            return Err(WeilError::ComponentCount { expected: self.algebra.nvars(), got: weil.len() });
        }
        let one = FragmentElem::constant(tn, WeilElement::one(ta));
        let mut out = FragmentElem::zero(tn, ta);
        for (m, w) in &self.terms {
            let mut base_part = one.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    base_part = base_part.mul(&base[i].pow(e)?)?;
                }
            }
            let weil_part = eval_polynomial(&w.to_polynomial(), weil, &one)?;
            out = out.add(&base_part.mul(&weil_part)?)?;
        }
        Ok(out)
    }

    /// Largest degree within each block of base variables.
    pub fn block_degrees(&self, blocks: &[usize]) -> Vec<u32> {
        let mut out = vec![0; blocks.len()];
        for m in self.terms.keys() {
            let mut start = 0;
            for (slot, &b) in out.iter_mut().zip(blocks) {
                *slot = (*slot).max(m.partial_degree(start..start + b));
                start += b;
            }
        }
        out
    }
}

/// `p(images)` for a polynomial `p` in the Weil variables.
pub(crate) fn eval_polynomial(
    p: &Polynomial,
    images: &[FragmentElem],
    one: &FragmentElem,
) -> Result<FragmentElem, WeilError> {
    let mut out = one.scale(&Q::from_integer(0.into()));
    for (m, c) in p.terms() {
        let mut term = one.scale(c);
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = term.mul(&images[j].pow(e)?)?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

impl fmt::Display for FragmentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars).map(|i| format!("s{i}")).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, w)| {
                if m.is_one() {
                    format!("({w})")
                } else {
                    format!("({w})*{}", m.display_with(&names))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FragmentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Nilpotent for FragmentElem {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl JetRing for FragmentElem {
    fn constant_like(&self, c: &Q) -> Self {
        FragmentElem::constant(self.nvars, WeilElement::constant(&self.algebra, c.clone()))
    }

    fn plus(&self, other: &Self) -> Result<Self, LiftError> {
        Ok(self.add(other)?)
    }

    fn minus(&self, other: &Self) -> Result<Self, LiftError> {
        Ok(self.sub(other)?)
    }

    fn times(&self, other: &Self) -> Result<Self, LiftError> {
        Ok(self.mul(other)?)
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn reciprocal(&self) -> Result<Self, LiftError> {
        if self.terms.keys().all(Monomial::is_one) {
            let c = self.coeff(&Monomial::one(self.nvars));
            return Ok(FragmentElem::constant(self.nvars, c.reciprocal()?));
        }
        Err(LiftError::NonPolynomial("division by a non-constant base polynomial".into()))
    }

    fn primitive(&self, p: Primitive) -> Result<Self, LiftError> {
        Err(LiftError::NonPolynomial(format!("{} leaves the polynomial fragment", p.name())))
    }
}
