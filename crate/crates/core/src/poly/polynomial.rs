use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::PolyError;
use crate::Q;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// The zero polynomial is the empty map; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    /// Build from `(monomial, coefficient)` pairs, collecting like terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Smallest monomial in graded-lex order.
    pub fn lowest_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    /// Full product, no truncation.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.mul_bounded(other, None)
    }

    /// Product with every monomial of total degree `>= k` deleted.
    pub fn mul_trunc(&self, other: &Polynomial, k: u32) -> Result<Polynomial, PolyError> {
        self.mul_bounded(other, Some(k))
    }

    fn mul_bounded(&self, other: &Polynomial, k: Option<u32>) -> Result<Polynomial, PolyError> {
        self.check_vars(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(k) = k {
                    if ma.degree() + mb.degree() >= k {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Drop every term of total degree `>= k`.
    pub fn truncate(&self, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow_trunc(&self, e: u32, k: Option<u32>) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul_bounded(self, k).expect("same ring");
        }
        acc
    }

    /// Substitute `images[i]` for variable `i`. All images must share a
    /// variable count, which becomes the result's. Truncates at `k` if given.
    pub fn substitute(&self, images: &[Polynomial], k: Option<u32>) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::VarCountMismatch { left: self.nvars, right: images.len() });
        }
        let target_vars = match images.first() {
            Some(p) => p.nvars,
            None => {
                // Constant polynomial in zero variables; needs an explicit target.
                return Err(PolyError::EmptySubstitution);
            }
        };
        self.substitute_into(images, target_vars, k)
    }

    /// Like [`Polynomial::substitute`], with the target variable count given
    /// explicitly so zero-variable sources work.
    pub fn substitute_into(
        &self,
        images: &[Polynomial],
        target_vars: usize,
        k: Option<u32>,
    ) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::VarCountMismatch { left: self.nvars, right: images.len() });
        }
        for img in images {
            if img.nvars != target_vars {
                return Err(PolyError::VarCountMismatch { left: target_vars, right: img.nvars });
            }
        }
        // power cache per variable
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|_| vec![Polynomial::one(target_vars)]).collect();
        let mut out = Polynomial::zero(target_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_vars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_bounded(&images[i], k)?;
                    powers[i].push(next);
                }
                term = term.mul_bounded(&powers[i][e as usize], k)?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Re-embed into `nvars` variables starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(nvars, offset), c.clone()))
                .collect(),
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    v *= x.powi(e as i32);
                }
                v
            })
            .sum()
    }

    /// Render with variable names, highest monomial first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.display_with(names));
            } else {
                s.push_str(&format!("{}*{}", abs, m.display_with(names)));
            }
        }
        s
    }

    /// Render with default names `x0, x1, ...`.
    pub fn to_string_default(&self) -> String {
        self.display_with(&default_names(self.nvars))
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_string_default())
    }
}
