use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::PolyError;
use crate::Q;

/// Parse a polynomial such as `1/2*x^2*y - 3*y^4` over the named variables.
///
/// Terms are joined by `+`/`-`; a term is a product of factors separated by
/// `*`, each factor a rational literal (`p` or `p/q`) or `name^e`.
pub fn parse_polynomial<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<Polynomial, PolyError> {
    let names: Vec<&str> = variables.iter().map(|s| s.as_ref()).collect();
    let mut parser = Parser { src: text.as_bytes(), pos: 0, names: &names };
    parser.polynomial()
}

/// Parse a rational literal `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Q, PolyError> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let mut parser = Parser { src: body.as_bytes(), pos: 0, names: &[] };
    let q = parser.rational()?;
    parser.skip_ws();
    if parser.pos != body.len() {
        return Err(parser.err("trailing characters after rational"));
    }
    Ok(if neg { -q } else { q })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn polynomial(&mut self) -> Result<Polynomial, PolyError> {
        let n = self.names.len();
        let mut out = Polynomial::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                _ if first => 1,
                _ => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, if sign < 0 { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Q), PolyError> {
        let n = self.names.len();
        let mut exps = vec![0u32; n];
        let mut coeff = Q::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.rational()?,
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.ident();
                    let idx = self
                        .names
                        .iter()
                        .position(|v| *v == name)
                        .ok_or_else(|| PolyError::UnknownVariable { name: name.clone(), pos: start })?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.integer()?.try_into().map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx] += e;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn digits(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let v = self.digits()?;
        u64::try_from(v).map_err(|_| self.err("integer too large"))
    }

    fn rational(&mut self) -> Result<Q, PolyError> {
        self.skip_ws();
        let num = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Q::new(num, den));
        }
        Ok(Q::from_integer(num))
    }
}
