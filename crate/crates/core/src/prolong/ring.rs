use num_traits::{One, Zero};

use crate::error::{LiftError, WeilError};
use crate::scalar::{half_binomial, rat_factorial_inv, Primitive, Scalar};
use crate::weil::WeilElement;
use crate::Q;

/// Arithmetic needed to evaluate an expression tree: a commutative ring
/// with partial inverse and primitive application.
pub trait JetRing: Clone + Sized {
    /// The constant `c` in the same ring as `self`.
    fn constant_like(&self, c: &Q) -> Self;
    fn plus(&self, other: &Self) -> Result<Self, LiftError>;
    fn minus(&self, other: &Self) -> Result<Self, LiftError>;
    fn times(&self, other: &Self) -> Result<Self, LiftError>;
    fn negated(&self) -> Self;
    fn reciprocal(&self) -> Result<Self, LiftError>;
    fn primitive(&self, p: Primitive) -> Result<Self, LiftError>;
}

fn weil(e: WeilError) -> LiftError {
    LiftError::Weil(e)
}

impl<S: Scalar> JetRing for WeilElement<S> {
    fn constant_like(&self, c: &Q) -> Self {
        WeilElement::constant(self.algebra(), S::from_rational(c))
    }

    fn plus(&self, other: &Self) -> Result<Self, LiftError> {
        self.add(other).map_err(weil)
    }

    fn minus(&self, other: &Self) -> Result<Self, LiftError> {
        self.sub(other).map_err(weil)
    }

    fn times(&self, other: &Self) -> Result<Self, LiftError> {
        self.mul(other).map_err(weil)
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn reciprocal(&self) -> Result<Self, LiftError> {
        self.inverse().map_err(|e| match e {
            WeilError::NotInvertible => {
                LiftError::Domain { primitive: "inverse".into(), at: self.augmentation().render() }
            }
            other => weil(other),
        })
    }

    fn primitive(&self, p: Primitive) -> Result<Self, LiftError> {
        let len = self.algebra().nilpotency_order() as usize;
        let series = S::primitive_series(p, &self.augmentation(), len)?;
        let eta = self.nilpotent_part();
        let coeffs: Vec<Self> =
            series.into_iter().map(|c| WeilElement::constant(self.algebra(), c)).collect();
        apply_series(&coeffs, &eta)
    }
}

/// `sum_j c_j eta^j` for nilpotent `eta`, stopping once `eta^j` vanishes.
pub fn apply_series<R: JetRing + Nilpotent>(coeffs: &[R], eta: &R) -> Result<R, LiftError> {
    let mut acc = coeffs.first().cloned().unwrap_or_else(|| eta.constant_like(&Q::zero()));
    let mut power = eta.constant_like(&Q::one());
    for c in coeffs.iter().skip(1) {
        power = power.times(eta)?;
        if power.vanishes() {
            break;
        }
        acc = acc.plus(&c.times(&power)?)?;
    }
    Ok(acc)
}

/// Rings where a zero test is available for series truncation.
pub trait Nilpotent {
    fn vanishes(&self) -> bool;
}

impl<S: Scalar> Nilpotent for WeilElement<S> {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// Taylor coefficients `p^(j)(a0)/j!` for `j < len`, where `a0` itself lives
/// in a jet ring. Only values of primitives at `a0` and its reciprocal are
/// needed, so this works for coefficient rings that are Weil algebras.
pub fn series_in_ring<R: JetRing>(p: Primitive, a0: &R, len: usize) -> Result<Vec<R>, LiftError> {
    let k = |q: Q| a0.constant_like(&q);
    let mut out = Vec::with_capacity(len);
    match p {
        Primitive::Exp => {
            let e = a0.primitive(Primitive::Exp)?;
            for j in 0..len {
                out.push(e.times(&k(rat_factorial_inv(j)))?);
            }
        }
        Primitive::Sin | Primitive::Cos => {
            let s = a0.primitive(Primitive::Sin)?;
            let c = a0.primitive(Primitive::Cos)?;
            let shift = if p == Primitive::Cos { 1 } else { 0 };
            for j in 0..len {
                let d = match (j + shift) % 4 {
                    0 => s.clone(),
                    1 => c.clone(),
                    2 => s.negated(),
                    _ => c.negated(),
                };
                out.push(d.times(&k(rat_factorial_inv(j)))?);
            }
        }
        Primitive::Log => {
            if len > 0 {
                out.push(a0.primitive(Primitive::Log)?);
            }
            if len > 1 {
                let inv = a0.reciprocal()?;
                let mut pow = inv.clone();
                for j in 1..len {
                    let sign = if j % 2 == 1 { 1 } else { -1 };
                    out.push(pow.times(&k(Q::new(sign.into(), j.into())))?);
                    pow = pow.times(&inv)?;
                }
            }
        }
        Primitive::Sqrt => {
            let root = a0.primitive(Primitive::Sqrt)?;
            let inv = if len > 1 { Some(a0.reciprocal()?) } else { None };
            let mut term = root;
            for j in 0..len {
                out.push(term.times(&k(half_binomial(j)))?);
                if let Some(inv) = &inv {
                    term = term.times(inv)?;
                }
            }
        }
    }
    Ok(out)
}
