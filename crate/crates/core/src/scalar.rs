//! Scalar modes for Weil-algebra coordinates: exact rationals and `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LiftError;
use crate::weil::WeilAlgebra;
use crate::Q;

/// Elementary primitives available in smooth-map expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Primitive {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Primitive {
    pub const ALL: [Primitive; 5] =
        [Primitive::Sin, Primitive::Cos, Primitive::Exp, Primitive::Log, Primitive::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
            Primitive::Exp => "exp",
            Primitive::Log => "log",
            Primitive::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Primitive> {
        Primitive::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn eval_f64(self, x: f64) -> f64 {
        match self {
            Primitive::Sin => x.sin(),
            Primitive::Cos => x.cos(),
            Primitive::Exp => x.exp(),
            Primitive::Log => x.ln(),
            Primitive::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Real,
}

/// Comparison tolerance for real mode; ignored in rational mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }
}

pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + Zero + One + 'static {
    const MODE: ScalarMode;

    fn from_rational(q: &Q) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    /// `None` for zero.
    fn recip(&self) -> Option<Self>;
    fn as_f64(&self) -> f64;
    /// Equality: exact for rationals, within `tol` for reals.
    fn close_to(&self, other: &Self, tol: Tolerance) -> bool;
    fn render(&self) -> String;

    /// Multiplication table of `alg` in this scalar mode.
    #[doc(hidden)]
    fn structure_constants(alg: &WeilAlgebra) -> &[Vec<Vec<(usize, Self)>>];

    /// Taylor coefficients `p^(j)(a0) / j!` for `j < len`.
    fn primitive_series(p: Primitive, a0: &Self, len: usize) -> Result<Vec<Self>, LiftError>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Q::from_integer(v.into()))
    }
}

fn factorial(j: usize) -> BigInt {
    (1..=j).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub(crate) fn rat_factorial_inv(j: usize) -> Q {
    Q::new(BigInt::one(), factorial(j))
}

/// `binom(1/2, j)`.
pub(crate) fn half_binomial(j: usize) -> Q {
    let half = Q::new(1.into(), 2.into());
    let mut acc = Q::one();
    for i in 0..j {
        acc *= &half - Q::from_integer(i.into());
    }
    acc / Q::from_integer(factorial(j))
}

fn domain(p: Primitive, at: String) -> LiftError {
    LiftError::Domain { primitive: p.name().to_string(), at }
}

fn exact_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

fn check_domain<S: Scalar>(p: Primitive, a0: &S, len: usize) -> Result<(), LiftError> {
    let v = a0.as_f64();
    match p {
        Primitive::Log if v <= 0.0 || (a0.is_zero()) => Err(domain(p, a0.render())),
        Primitive::Sqrt if v < 0.0 || (a0.is_zero() && len > 1) => Err(domain(p, a0.render())),
        _ => Ok(()),
    }
}

impl Scalar for Q {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self))
        }
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn close_to(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }
    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
    fn structure_constants(alg: &WeilAlgebra) -> &[Vec<Vec<(usize, Self)>>] {
        alg.table_q()
    }

    fn primitive_series(p: Primitive, a0: &Self, len: usize) -> Result<Vec<Self>, LiftError> {
        check_domain(p, a0, len)?;
        let inexact = || LiftError::Inexact { primitive: p.name().to_string(), at: a0.render() };
        let out = match p {
            Primitive::Exp if Zero::is_zero(a0) => (0..len).map(rat_factorial_inv).collect(),
            Primitive::Sin if Zero::is_zero(a0) => (0..len)
                .map(|j| match j % 4 {
                    1 => rat_factorial_inv(j),
                    3 => -rat_factorial_inv(j),
                    _ => Q::zero(),
                })
                .collect(),
            Primitive::Cos if Zero::is_zero(a0) => (0..len)
                .map(|j| match j % 4 {
                    0 => rat_factorial_inv(j),
                    2 => -rat_factorial_inv(j),
                    _ => Q::zero(),
                })
                .collect(),
            Primitive::Log if One::is_one(a0) => log_tail(a0, len, Q::zero()),
            Primitive::Sqrt => {
                let root = exact_sqrt(a0).ok_or_else(inexact)?;
                let inv = if len > 1 { num_traits::Inv::inv(a0) } else { Q::one() };
                let mut pow = Q::one();
                let mut out = Vec::with_capacity(len);
                for j in 0..len {
                    out.push(&root * half_binomial(j) * &pow);
                    pow *= &inv;
                }
                out
            }
            _ => return Err(inexact()),
        };
        Ok(out)
    }
}

/// Series of log at `a0` given its value: `(-1)^(j+1) / (j a0^j)` for `j >= 1`.
fn log_tail<S: Scalar>(a0: &S, len: usize, value: S) -> Vec<S> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(value);
    let inv = a0.recip().expect("log domain checked");
    let mut pow = S::one();
    for j in 1..len {
        pow = pow.times(&inv);
        let c = S::from_rational(&Q::new(if j % 2 == 1 { 1 } else { -1 }.into(), j.into()));
        out.push(c.times(&pow));
    }
    out
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Real;

    fn from_rational(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn close_to(&self, other: &Self, tol: Tolerance) -> bool {
        tol.close(*self, *other)
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
    fn structure_constants(alg: &WeilAlgebra) -> &[Vec<Vec<(usize, Self)>>] {
        alg.table_f()
    }

    fn primitive_series(p: Primitive, a0: &Self, len: usize) -> Result<Vec<Self>, LiftError> {
        check_domain(p, a0, len)?;
        let a = *a0;
        let inv_fact = |j: usize| 1.0 / (1..=j).fold(1.0, |acc, i| acc * i as f64);
        let out = match p {
            Primitive::Exp => {
                let e = a.exp();
                (0..len).map(|j| e * inv_fact(j)).collect()
            }
            Primitive::Sin | Primitive::Cos => {
                let (s, c) = a.sin_cos();
                // derivatives of sin cycle sin, cos, -sin, -cos; cos is shifted by one
                let shift = if p == Primitive::Cos { 1 } else { 0 };
                (0..len)
                    .map(|j| {
                        let d = match (j + shift) % 4 {
                            0 => s,
                            1 => c,
                            2 => -s,
                            _ => -c,
                        };
                        d * inv_fact(j)
                    })
                    .collect()
            }
            Primitive::Log => log_tail(&a, len, a.ln()),
            Primitive::Sqrt => {
                let root = a.sqrt();
                let mut pow = 1.0;
                let mut out = Vec::with_capacity(len);
                for j in 0..len {
                    out.push(root * ToPrimitive::to_f64(&half_binomial(j)).unwrap() * pow);
                    pow /= a;
                }
                out
            }
        };
        Ok(out)
    }
}
