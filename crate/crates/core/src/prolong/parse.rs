use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::LiftError;
use crate::scalar::Primitive;
use crate::Q;

use super::expr::{Expr, SmoothMap};

/// Parse one scalar expression over `t0, t1, ...` (aliases `t`/`x` = `t0`,
/// `y` = `t1`, `z` = `t2`).
pub fn parse_expr(text: &str) -> Result<Expr, LiftError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse a map: a single expression, or a comma-separated tuple with
/// optional surrounding parentheses. Arity defaults to one more than the
/// largest variable index (at least 1).
pub fn parse_map(text: &str, arity: Option<usize>) -> Result<SmoothMap, LiftError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let outputs = match p.tuple()? {
        Some(items) => items,
        None => {
            p.pos = 0;
            let mut items = vec![p.expr()?];
            p.skip_ws();
            while p.eat(b',') {
                items.push(p.expr()?);
                p.skip_ws();
            }
            if p.pos < p.src.len() {
                return Err(p.err("unexpected trailing input"));
            }
            items
        }
    };
    let inferred = outputs.iter().filter_map(Expr::max_var).max().map_or(1, |v| v + 1);
    SmoothMap::new(arity.unwrap_or(inferred), outputs)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> LiftError {
        LiftError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `( e1, e2, ... )` spanning the whole input, with at least two items.
    fn tuple(&mut self) -> Result<Option<Vec<Expr>>, LiftError> {
        if !self.eat(b'(') {
            return Ok(None);
        }
        let first = match self.expr() {
            Ok(e) => e,
            Err(_) => return Ok(None),
        };
        if self.peek() != Some(b',') {
            return Ok(None);
        }
        let mut items = vec![first];
        while self.eat(b',') {
            items.push(self.expr()?);
        }
        if !self.eat(b')') {
            return Err(self.err("expected `)` closing the tuple"));
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(Some(items))
    }

    fn expr(&mut self) -> Result<Expr, LiftError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, LiftError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'(') {
                // juxtaposition: `2t`, `3(t + 1)`
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, LiftError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, LiftError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected `)` after exponent"));
        }
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn primary(&mut self) -> Result<Expr, LiftError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(p) = Primitive::from_name(name) {
                    if !self.eat(b'(') {
                        return Err(self.err("expected `(` after function name"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    return Ok(Expr::Call(p, Box::new(arg)));
                }
                let index = match name {
                    "t" | "x" => Some(0),
                    "y" => Some(1),
                    "z" => Some(2),
                    _ => name.strip_prefix('t').and_then(|d| d.parse::<usize>().ok()),
                };
                index.map(Expr::Var).ok_or(LiftError::Syntax {
                    pos: start,
                    msg: format!("unknown identifier `{name}`"),
                })
            }
            Some(c) => Err(self.err(&format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, LiftError> {
        let start = self.pos;
        let mut int = BigInt::zero();
        let mut denom = BigInt::one();
        let mut seen_dot = false;
        let mut digits = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int = int * 10 + BigInt::from(c - b'0');
                if seen_dot {
                    denom *= 10;
                }
                digits += 1;
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits == 0 {
            return Err(LiftError::Syntax { pos: start, msg: "malformed number".into() });
        }
        Ok(Expr::Const(Q::new(int, denom)))
    }
}

/// Rational literal: integer, `p/q`, or finite decimal.
pub fn parse_scalar(text: &str) -> Result<Q, LiftError> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_scalar(n)?;
        let d = parse_scalar(d)?;
        if d.is_zero() {
            return Err(LiftError::Syntax { pos: 0, msg: "zero denominator".into() });
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let mut p = Parser { src: body.as_bytes(), pos: 0 };
    match p.number()? {
        Expr::Const(q) if p.pos == body.len() => Ok(if neg { -q } else { q }),
        _ => Err(LiftError::Syntax { pos: p.pos, msg: format!("not a rational number: `{s}`") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_aliases() {
        let e = parse_expr("-x^2 + 2*y/3").unwrap();
        assert_eq!(e.eval_f64(&[3.0, 1.5]).unwrap(), -9.0 + 1.0);
        assert_eq!(e.max_var(), Some(1));
        let e = parse_expr("t0*t2 + sin(t1)").unwrap();
        assert_eq!(e.max_var(), Some(2));
    }

    #[test]
    fn negative_exponent_and_decimal() {
        let e = parse_expr("t^(-2) + 0.25").unwrap();
        assert_eq!(e.eval_f64(&[2.0]).unwrap(), 0.5);
        assert_eq!(parse_scalar("-0.5").unwrap(), Q::new((-1).into(), 2.into()));
        assert_eq!(parse_scalar("3/4").unwrap(), Q::new(3.into(), 4.into()));
    }

    #[test]
    fn juxtaposition() {
        let e = parse_expr("2t(t + 1)").unwrap();
        assert_eq!(e.eval_f64(&[3.0]).unwrap(), 24.0);
    }

    #[test]
    fn tuples() {
        let m = parse_map("(t, t^2 + t^3)", None).unwrap();
        assert_eq!((m.arity(), m.coarity()), (1, 2));
        let m = parse_map("x*y, x + y", None).unwrap();
        assert_eq!((m.arity(), m.coarity()), (2, 2));
        let m = parse_map("(t + 1)*(t - 1)", None).unwrap();
        assert_eq!(m.coarity(), 1);
        let m = parse_map("5", Some(2)).unwrap();
        assert_eq!(m.arity(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_expr("t + * 2") {
            Err(LiftError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("foo(t)").is_err());
        assert!(parse_expr("sin t").is_err());
        assert!(parse_expr("t^y").is_err());
        assert!(parse_map("t0 + t3", Some(2)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["t^2 - 3*t + 1/2", "sin(t0*t1)/(1 + exp(-t1))", "(t0 - t1)^3", "-(t + 1)*t^(-1)"] {
            let e = parse_expr(s).unwrap();
            let again = parse_expr(&e.to_string()).unwrap();
            for x in [0.3, 1.7] {
                let pt = [x, x / 2.0];
                assert_eq!(e.eval_f64(&pt).unwrap(), again.eval_f64(&pt).unwrap(), "{s} vs {e}");
            }
        }
    }

    #[test]
    fn polynomial_degrees() {
        let deg = |s: &str| parse_expr(s).unwrap().degree();
        assert_eq!(deg("3"), Some(0));
        assert_eq!(deg("x^2*y - 1"), Some(3));
        assert_eq!(deg("(x + y^2)^3"), Some(6));
        assert_eq!(deg("sin(x)"), None);
    }
}
