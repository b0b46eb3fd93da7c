use std::fmt;
use std::sync::Arc;

use crate::error::WeilError;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, ScalarMode, Tolerance};
use crate::Q;

use super::algebra::WeilAlgebra;

/// An element of a Weil algebra, as coordinates over its quotient basis.
#[derive(Clone)]
pub struct WeilElement<S> {
    algebra: Arc<WeilAlgebra>,
    coords: Vec<S>,
}

impl<S: Scalar> WeilElement<S> {
    pub fn zero(algebra: &Arc<WeilAlgebra>) -> Self {
        WeilElement { algebra: algebra.clone(), coords: vec![S::zero(); algebra.dimension()] }
    }

    pub fn constant(algebra: &Arc<WeilAlgebra>, c: S) -> Self {
        let mut e = Self::zero(algebra);
        // the constant monomial is always basis element 0
        e.coords[0] = c;
        e
    }

    pub fn one(algebra: &Arc<WeilAlgebra>) -> Self {
        Self::constant(algebra, S::one())
    }

    /// Class of the presentation variable `x_i`.
    pub fn variable(algebra: &Arc<WeilAlgebra>, i: usize) -> Self {
        Self::from_polynomial(algebra, &Polynomial::var(algebra.nvars(), i))
    }

    pub fn from_polynomial(algebra: &Arc<WeilAlgebra>, p: &Polynomial) -> Self {
        let coords = algebra.coords_of(p).iter().map(S::from_rational).collect();
        WeilElement { algebra: algebra.clone(), coords }
    }

    pub fn from_coords(algebra: &Arc<WeilAlgebra>, coords: Vec<S>) -> Result<Self, WeilError> {
        if coords.len() != algebra.dimension() {
            return Err(WeilError::CoordinateCount { expected: algebra.dimension(), got: coords.len() });
        }
        Ok(WeilElement { algebra: algebra.clone(), coords })
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    fn check(&self, other: &Self) -> Result<(), WeilError> {
        if WeilAlgebra::same(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(WeilError::AlgebraMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, WeilError> {
        self.check(other)?;
        Ok(WeilElement {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeilError> {
        self.zip_with(other, S::plus)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeilError> {
        self.zip_with(other, S::minus)
    }

    pub fn neg(&self) -> Self {
        self.map(S::negate)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.times(c))
    }

    fn map(&self, f: impl Fn(&S) -> S) -> Self {
        WeilElement { algebra: self.algebra.clone(), coords: self.coords.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, WeilError> {
        self.check(other)?;
        let dim = self.coords.len();
        let mut out = vec![S::zero(); dim];
        let table = S::structure_constants(&self.algebra);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.times(b);
                for (k, c) in &table[i][j] {
                    out[*k] = out[*k].plus(&ab.times(c));
                }
            }
        }
        Ok(WeilElement { algebra: self.algebra.clone(), coords: out })
    }

    /// The coefficient of the constant monomial.
    pub fn augmentation(&self) -> S {
        self.coords[0].clone()
    }

    /// `self - augmentation(self)`.
    pub fn nilpotent_part(&self) -> Self {
        let mut e = self.clone();
        e.coords[0] = S::zero();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(S::is_zero)
    }

    /// Inverse via the geometric series in the nilpotent part.
    pub fn inverse(&self) -> Result<Self, WeilError> {
        let a0 = self.augmentation();
        let inv0 = a0.recip().ok_or(WeilError::NotInvertible)?;
        // (a0 + n)^-1 = inv0 * sum_j (-n * inv0)^j
        let q = self.nilpotent_part().scale(&inv0.negate());
        let mut term = Self::one(&self.algebra);
        let mut acc = term.clone();
        loop {
            term = term.mul(&q)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc.scale(&inv0))
    }

    pub fn pow(&self, e: i64) -> Result<Self, WeilError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(&self.algebra);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn close_to(&self, other: &Self, tol: Tolerance) -> bool {
        WeilAlgebra::same(&self.algebra, &other.algebra)
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a.close_to(b, tol))
    }

    /// Canonical serialization: nonzero `(monomial, coefficient)` pairs in
    /// ascending graded-lex order.
    pub fn serialize_terms(&self) -> Vec<(String, String)> {
        self.algebra
            .quotient_basis()
            .iter()
            .zip(&self.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.display_with(self.algebra.names()), c.render()))
            .collect()
    }

    /// Real-mode copy.
    pub fn to_real(&self) -> WeilElement<f64> {
        WeilElement { algebra: self.algebra.clone(), coords: self.coords.iter().map(S::as_f64).collect() }
    }
}

impl WeilElement<Q> {
    /// Canonical polynomial representative.
    pub fn to_polynomial(&self) -> Polynomial {
        self.algebra.polynomial_of(&self.coords)
    }
}

impl<S: Scalar> PartialEq for WeilElement<S> {
    fn eq(&self, other: &Self) -> bool {
        WeilAlgebra::same(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl<S: Scalar> fmt::Debug for WeilElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for WeilElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.serialize_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(m, c)| if m == "1" { c } else { format!("{c}*{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
