use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::monomial::{monomials_below, Monomial};
use super::polynomial::Polynomial;
use crate::Q;

/// Reduced row-echelon basis of the image of `<generators> + m^k` inside
/// the truncated ring `Q[x_1..x_n]/m^k`.
///
/// Each row's pivot is its smallest monomial in graded-lex order, has
/// coefficient 1, and occurs in no other row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionBasis {
    nvars: usize,
    k: u32,
    rows: BTreeMap<Monomial, Polynomial>,
}

impl ReductionBasis {
    /// Row-reduce the span of `trunc(g * mu)` over generators `g` and
    /// monomials `mu` of degree `< k`.
    pub fn build(nvars: usize, generators: &[Polynomial], k: u32) -> ReductionBasis {
        assert!(k >= 1, "truncation order must be positive");
        let mut basis = ReductionBasis { nvars, k, rows: BTreeMap::new() };
        let multipliers = monomials_below(nvars, k);
        for g in generators {
            assert_eq!(g.nvars(), nvars, "generator variable count");
            let g = g.truncate(k);
            if g.is_zero() {
                continue;
            }
            let low = g.lowest_monomial().unwrap().degree();
            for mu in &multipliers {
                if mu.degree() + low >= k {
                    break;
                }
                basis.insert(g.mul_monomial(mu).truncate(k));
            }
        }
        basis
    }

    /// Add a vector to the span, keeping the basis fully reduced.
    fn insert(&mut self, v: Polynomial) {
        let v = self.reduce_truncated(v);
        let Some(pivot) = v.lowest_monomial().cloned() else {
            return;
        };
        let inv = Q::one() / v.coeff(&pivot);
        let row = v.scale(&inv);
        for other in self.rows.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                *other = other.sub(&row.scale(&c)).expect("same ring");
            }
        }
        self.rows.insert(pivot, row);
    }

    fn reduce_truncated(&self, mut p: Polynomial) -> Polynomial {
        for (pivot, row) in &self.rows {
            let c = p.coeff(pivot);
            if !c.is_zero() {
                p = p.sub(&row.scale(&c)).expect("same ring");
            }
        }
        p
    }

    /// Canonical representative: truncate at `k`, then eliminate pivots.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.nvars, "normal_form variable count");
        self.reduce_truncated(p.truncate(self.k))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation_order(&self) -> u32 {
        self.k
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.rows.iter()
    }

    pub fn pivot_set(&self) -> BTreeSet<Monomial> {
        self.rows.keys().cloned().collect()
    }

    pub fn is_pivot(&self, m: &Monomial) -> bool {
        self.rows.contains_key(m)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
