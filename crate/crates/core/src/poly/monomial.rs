use std::cmp::Ordering;
use std::fmt;

/// A monomial `x_0^e_0 * ... * x_{n-1}^e_{n-1}`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors compared lexicographically (so `x > y` when `x` is variable 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    /// The monomial consisting of a single variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Degree restricted to the variable range `vars`.
    pub fn partial_degree(&self, vars: std::ops::Range<usize>) -> u32 {
        self.exps[vars].iter().sum()
    }

    /// Concatenate exponent vectors: variables of `self` first.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend_from_slice(&other.exps);
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// Split into the first `at` variables and the rest.
    pub fn split_at(&self, at: usize) -> (Monomial, Monomial) {
        let (a, b) = self.exps.split_at(at);
        (Monomial::new(a.to_vec()), Monomial::new(b.to_vec()))
    }

    /// Re-embed into `nvars` variables starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Monomial { exps, degree: self.degree }
    }

    /// Render with the given variable names, `1` for the constant monomial.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// All monomials in `nvars` variables of total degree `< bound`, ascending.
pub fn monomials_below(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..bound {
        monomials_of_degree(nvars, d, &mut out);
    }
    out.sort();
    out
}

/// Monomials with degree at most `d` separately within each variable block.
pub fn monomials_in_blocks(blocks: &[usize], d: u32) -> Vec<Monomial> {
    let mut acc = vec![Monomial::new(Vec::new())];
    for &b in blocks {
        let block = monomials_below(b, d + 1);
        acc = acc
            .iter()
            .flat_map(|m| block.iter().map(move |bm| m.concat(bm)))
            .collect();
    }
    acc.sort();
    acc
}

fn monomials_of_degree(nvars: usize, d: u32, out: &mut Vec<Monomial>) {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    let mut cur = vec![0; nvars];
    rec(0, d, &mut cur, out);
}

/// Binomial coefficient as u64, for dimension formulas.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x = Monomial::new(vec![1, 0]);
        let y = Monomial::new(vec![0, 1]);
        let xy = Monomial::new(vec![1, 1]);
        let y3 = Monomial::new(vec![0, 3]);
        assert!(Monomial::one(2) < y);
        assert!(y < x);
        assert!(x < xy);
        assert!(xy < y3);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_below(2, 4).len(), 10);
        assert_eq!(monomials_below(0, 3).len(), 1);
        assert_eq!(monomials_below(3, 1).len(), 1);
        for n in 0..4u64 {
            for d in 0..5u64 {
                assert_eq!(
                    monomials_below(n as usize, d as u32 + 1).len() as u64,
                    binomial(n + d, d)
                );
            }
        }
        assert_eq!(monomials_in_blocks(&[1, 1], 2).len(), 9);
        assert_eq!(monomials_in_blocks(&[], 2).len(), 1);
    }
}
