use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LiftError;
use crate::scalar::Primitive;
use crate::Q;

use super::ring::JetRing;

/// Expression tree over input variables, rational constants, the field
/// operations, integer powers, and the elementary primitives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Const(Q),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Primitive, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Const(Q::from_integer(v.into()))
    }

    pub fn konst(q: Q) -> Expr {
        Expr::Const(q)
    }

    // Smart constructors fold constants and trivial identities so that
    // repeated symbolic differentiation stays small.

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(x), e) | (e, Expr::Const(x)) if x.is_zero() => e,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            (e, Expr::Const(y)) if y.is_zero() => e,
            (Expr::Const(x), e) if x.is_zero() => Expr::neg(e),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(x), _) | (_, Expr::Const(x)) if x.is_zero() => Expr::Const(Q::zero()),
            (Expr::Const(x), e) | (e, Expr::Const(x)) if x.is_one() => e,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) if !y.is_zero() => Expr::Const(x / y),
            (Expr::Const(x), _) if x.is_zero() => Expr::Const(Q::zero()),
            (e, Expr::Const(y)) if y.is_one() => e,
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            Expr::Neg(e) => *e,
            e => Expr::Neg(Box::new(e)),
        }
    }

    pub fn pow(a: Expr, n: i64) -> Expr {
        match (a, n) {
            (_, 0) => Expr::int(1),
            (e, 1) => e,
            (Expr::Const(x), n) if n > 0 || !x.is_zero() => {
                let base = if n < 0 { Q::one() / x } else { x };
                Expr::Const(num_traits::pow::pow(base, n.unsigned_abs() as usize))
            }
            (e, n) => Expr::Pow(Box::new(e), n),
        }
    }

    pub fn call(p: Primitive, a: Expr) -> Expr {
        Expr::Call(p, Box::new(a))
    }

    pub fn from_polynomial(p: &crate::poly::Polynomial) -> Expr {
        let mut acc = Expr::int(0);
        for (m, c) in p.terms() {
            let mut term = Expr::Const(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = Expr::mul(term, Expr::pow(Expr::Var(i), e as i64));
                }
            }
            acc = Expr::add(acc, term);
        }
        acc
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
        }
    }

    /// Built only from variables, constants, `+ - *` and non-negative powers.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Div(a, b) => a.is_polynomial() && matches!(**b, Expr::Const(ref c) if !c.is_zero()),
            Expr::Neg(a) => a.is_polynomial(),
            Expr::Pow(a, n) => *n >= 0 && a.is_polynomial(),
            Expr::Call(..) => false,
        }
    }

    /// Upper bound on the total degree of a polynomial expression; `None`
    /// for anything that is not polynomial.
    pub fn degree(&self) -> Option<u32> {
        if !self.is_polynomial() {
            return None;
        }
        Some(match self {
            Expr::Var(_) => 1,
            Expr::Const(_) => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree()?.max(b.degree()?),
            Expr::Mul(a, b) => a.degree()? + b.degree()?,
            Expr::Div(a, _) | Expr::Neg(a) => a.degree()?,
            Expr::Pow(a, n) => a.degree()? * *n as u32,
            Expr::Call(..) => unreachable!(),
        })
    }

    pub fn uses_primitives(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_primitives() || b.uses_primitives()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_primitives(),
            Expr::Call(..) => true,
        }
    }

    /// Substitute `args[i]` for `Var(i)`.
    pub fn compose(&self, args: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => args[*i].clone(),
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Add(a, b) => Expr::add(a.compose(args), b.compose(args)),
            Expr::Sub(a, b) => Expr::sub(a.compose(args), b.compose(args)),
            Expr::Mul(a, b) => Expr::mul(a.compose(args), b.compose(args)),
            Expr::Div(a, b) => Expr::div(a.compose(args), b.compose(args)),
            Expr::Neg(a) => Expr::neg(a.compose(args)),
            Expr::Pow(a, n) => Expr::pow(a.compose(args), *n),
            Expr::Call(p, a) => Expr::call(*p, a.compose(args)),
        }
    }

    /// Symbolic partial derivative with respect to `Var(var)`.
    pub fn diff(&self, var: usize) -> Expr {
        match self {
            Expr::Var(i) => Expr::int((*i == var) as i64),
            Expr::Const(_) => Expr::int(0),
            Expr::Add(a, b) => Expr::add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => Expr::sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(var), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => Expr::div(
                Expr::sub(
                    Expr::mul(a.diff(var), (**b).clone()),
                    Expr::mul((**a).clone(), b.diff(var)),
                ),
                Expr::pow((**b).clone(), 2),
            ),
            Expr::Neg(a) => Expr::neg(a.diff(var)),
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::int(*n), Expr::pow((**a).clone(), n - 1)),
                a.diff(var),
            ),
            Expr::Call(p, a) => {
                let inner = (**a).clone();
                let outer = match p {
                    Primitive::Sin => Expr::call(Primitive::Cos, inner),
                    Primitive::Cos => Expr::neg(Expr::call(Primitive::Sin, inner)),
                    Primitive::Exp => Expr::call(Primitive::Exp, inner),
                    Primitive::Log => Expr::div(Expr::int(1), inner),
                    Primitive::Sqrt => {
                        Expr::div(Expr::int(1), Expr::mul(Expr::int(2), Expr::call(Primitive::Sqrt, inner)))
                    }
                };
                Expr::mul(outer, a.diff(var))
            }
        }
    }

    /// Plain double-precision evaluation with domain guards.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, LiftError> {
        let guard = |name: &str, v: f64| LiftError::Domain { primitive: name.to_string(), at: format!("{v:?}") };
        Ok(match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            Expr::Add(a, b) => a.eval_f64(x)? + b.eval_f64(x)?,
            Expr::Sub(a, b) => a.eval_f64(x)? - b.eval_f64(x)?,
            Expr::Mul(a, b) => a.eval_f64(x)? * b.eval_f64(x)?,
            Expr::Div(a, b) => {
                let d = b.eval_f64(x)?;
                if d == 0.0 {
                    return Err(guard("division", d));
                }
                a.eval_f64(x)? / d
            }
            Expr::Neg(a) => -a.eval_f64(x)?,
            Expr::Pow(a, n) => {
                let v = a.eval_f64(x)?;
                if *n < 0 && v == 0.0 {
                    return Err(guard("negative power", v));
                }
                v.powi(*n as i32)
            }
            Expr::Call(p, a) => {
                let v = a.eval_f64(x)?;
                match p {
                    Primitive::Log if v <= 0.0 => return Err(guard("log", v)),
                    Primitive::Sqrt if v < 0.0 => return Err(guard("sqrt", v)),
                    _ => p.eval_f64(v),
                }
            }
        })
    }

    /// Evaluate in any jet ring; `template` supplies the ring for constants.
    pub fn eval<R: JetRing>(&self, inputs: &[R], template: &R) -> Result<R, LiftError> {
        Ok(match self {
            Expr::Var(i) => inputs[*i].clone(),
            Expr::Const(c) => template.constant_like(c),
            Expr::Add(a, b) => a.eval(inputs, template)?.plus(&b.eval(inputs, template)?)?,
            Expr::Sub(a, b) => a.eval(inputs, template)?.minus(&b.eval(inputs, template)?)?,
            Expr::Mul(a, b) => a.eval(inputs, template)?.times(&b.eval(inputs, template)?)?,
            Expr::Div(a, b) => {
                let d = b.eval(inputs, template)?.reciprocal()?;
                a.eval(inputs, template)?.times(&d)?
            }
            Expr::Neg(a) => a.eval(inputs, template)?.negated(),
            Expr::Pow(a, n) => {
                let base = a.eval(inputs, template)?;
                let base = if *n < 0 { base.reciprocal()? } else { base };
                let mut acc = template.constant_like(&Q::one());
                for _ in 0..n.unsigned_abs() {
                    acc = acc.times(&base)?;
                }
                acc
            }
            Expr::Call(p, a) => a.eval(inputs, template)?.primitive(*p)?,
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: sum, 1: product, 2: unary, 3: power base
        let (my, open) = match self {
            Expr::Add(..) | Expr::Sub(..) => (0, prec > 0),
            Expr::Mul(..) | Expr::Div(..) => (1, prec > 1),
            Expr::Neg(_) => (2, prec > 2),
            Expr::Const(c) if c.is_negative() || !c.denom().is_one() => (2, prec > 1),
            _ => (3, false),
        };
        if open {
            write!(f, "(")?;
        }
        match self {
            Expr::Var(i) => write!(f, "t{i}")?,
            Expr::Const(c) => write!(f, "{c}")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "*")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "/")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 2)?;
            }
            Expr::Pow(a, n) => {
                a.fmt_prec(f, 3)?;
                if *n < 0 {
                    write!(f, "^({n})")?;
                } else {
                    write!(f, "^{n}")?;
                }
            }
            Expr::Call(p, a) => {
                write!(f, "{}(", p.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        let _ = my;
        if open {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// A smooth map `R^n -> R^m` given by one expression per output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmoothMap {
    arity: usize,
    outputs: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(arity: usize, outputs: Vec<Expr>) -> Result<SmoothMap, LiftError> {
        for e in &outputs {
            if let Some(v) = e.max_var() {
                if v >= arity {
                    return Err(LiftError::Arity { expected: arity, got: v + 1 });
                }
            }
        }
        Ok(SmoothMap { arity, outputs })
    }

    pub fn scalar(arity: usize, e: Expr) -> Result<SmoothMap, LiftError> {
        SmoothMap::new(arity, vec![e])
    }

    pub fn identity(n: usize) -> SmoothMap {
        SmoothMap { arity: n, outputs: (0..n).map(Expr::Var).collect() }
    }

    /// Projection onto outputs `range` of an `n`-tuple.
    pub fn projection(n: usize, range: std::ops::Range<usize>) -> SmoothMap {
        SmoothMap { arity: n, outputs: range.map(Expr::Var).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coarity(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[Expr] {
        &self.outputs
    }

    pub fn is_polynomial(&self) -> bool {
        self.outputs.iter().all(Expr::is_polynomial)
    }

    /// Raise the arity (extra inputs ignored).
    pub fn with_arity(mut self, n: usize) -> Result<SmoothMap, LiftError> {
        if let Some(v) = self.outputs.iter().filter_map(Expr::max_var).max() {
            if v >= n {
                return Err(LiftError::Arity { expected: n, got: v + 1 });
            }
        }
        self.arity = n;
        Ok(self)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SmoothMap) -> Result<SmoothMap, LiftError> {
        if next.arity != self.coarity() {
            return Err(LiftError::Arity { expected: next.arity, got: self.coarity() });
        }
        Ok(SmoothMap {
            arity: self.arity,
            outputs: next.outputs.iter().map(|e| e.compose(&self.outputs)).collect(),
        })
    }

    /// Restrict to the outputs in `range`.
    pub fn select(&self, range: std::ops::Range<usize>) -> SmoothMap {
        SmoothMap { arity: self.arity, outputs: self.outputs[range].to_vec() }
    }

    /// Tuple of two maps with the same arity.
    pub fn pair(&self, other: &SmoothMap) -> Result<SmoothMap, LiftError> {
        if self.arity != other.arity {
            return Err(LiftError::Arity { expected: self.arity, got: other.arity });
        }
        let mut outputs = self.outputs.clone();
        outputs.extend(other.outputs.iter().cloned());
        Ok(SmoothMap { arity: self.arity, outputs })
    }

    pub fn eval<R: JetRing>(&self, inputs: &[R], template: &R) -> Result<Vec<R>, LiftError> {
        if inputs.len() != self.arity {
            return Err(LiftError::Arity { expected: self.arity, got: inputs.len() });
        }
        self.outputs.iter().map(|e| e.eval(inputs, template)).collect()
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.outputs.len() == 1 {
            return write!(f, "{}", self.outputs[0]);
        }
        write!(f, "(")?;
        for (i, e) in self.outputs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothMap[{} -> {}]({self})", self.arity, self.coarity())
    }
}
