use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::error::WeilError;
use crate::linalg;
use crate::poly::{monomials_below, parse_polynomial, Monomial, Polynomial, ReductionBasis};
use crate::Q;

use super::presentation::WeilPresentation;

/// Sparse structure constants: `table[i][j]` lists `(k, c)` with
/// `e_i * e_j = sum c e_k`.
type MulTable<S> = Vec<Vec<Vec<(usize, S)>>>;

/// A Weil algebra `Q[x_1..x_n] / (<generators> + m^k)`.
///
/// Identity is structural: variable names, nilpotency witness, and the
/// reduced echelon form of the ideal.
pub struct WeilAlgebra {
    names: Vec<String>,
    generators: Vec<Polynomial>,
    k: u32,
    reduction: ReductionBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    table_q: MulTable<Q>,
    table_f: MulTable<f64>,
}

impl WeilAlgebra {
    pub fn from_presentation(pres: &WeilPresentation) -> Result<Arc<WeilAlgebra>, WeilError> {
        let gens = pres
            .relations
            .iter()
            .map(|r| parse_polynomial(r, &pres.variables))
            .collect::<Result<Vec<_>, _>>()?;
        WeilAlgebra::new(pres.variables.clone(), gens, pres.nilpotency)
    }

    pub fn preset(name: &str) -> Result<Arc<WeilAlgebra>, WeilError> {
        WeilAlgebra::from_presentation(&WeilPresentation::preset(name)?)
    }

    /// `R`, the zero-variable algebra.
    pub fn real() -> Arc<WeilAlgebra> {
        WeilAlgebra::new(Vec::new(), Vec::new(), 1).expect("R is a Weil algebra")
    }

    /// `R[t]/(t^(order+1))`, the algebra of `order`-jets.
    pub fn jet(order: u32) -> Arc<WeilAlgebra> {
        let t = Polynomial::var(1, 0).pow_trunc(order + 1, None);
        WeilAlgebra::new(vec!["t".into()], vec![t], order + 1).expect("jet algebra")
    }

    pub fn new(names: Vec<String>, generators: Vec<Polynomial>, k: u32) -> Result<Arc<WeilAlgebra>, WeilError> {
        if k == 0 {
            return Err(WeilError::ZeroNilpotency);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(WeilError::DuplicateVariable(n.clone()));
            }
        }
        let nvars = names.len();
        for g in &generators {
            if g.nvars() != nvars {
                return Err(WeilError::Poly(crate::poly::PolyError::VarCountMismatch {
                    left: nvars,
                    right: g.nvars(),
                }));
            }
            if !g.constant_term().is_zero() {
                return Err(WeilError::ImproperIdeal(format!(
                    "relation `{}` has nonzero constant term",
                    g.display_with(&names)
                )));
            }
        }
        let reduction = ReductionBasis::build(nvars, &generators, k);
        if reduction.is_pivot(&Monomial::one(nvars)) {
            return Err(WeilError::ImproperIdeal("1 lies in the ideal".into()));
        }
        let basis: Vec<Monomial> = monomials_below(nvars, k)
            .into_iter()
            .filter(|m| !reduction.is_pivot(m))
            .collect();
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let dim = basis.len();
        let mut table_q: MulTable<Q> = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                if basis[i].degree() + basis[j].degree() >= k {
                    continue;
                }
                let prod = Polynomial::monomial(basis[i].mul(&basis[j]), Q::from_integer(1.into()));
                let nf = reduction.normal_form(&prod);
                let entry: Vec<(usize, Q)> = nf.terms().map(|(m, c)| (index[m], c.clone())).collect();
                table_q[j][i] = entry.clone();
                table_q[i][j] = entry;
            }
        }
        let table_f = table_q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(|(k, c)| (*k, c.to_f64().unwrap_or(f64::NAN))).collect())
                    .collect()
            })
            .collect();
        Ok(Arc::new(WeilAlgebra { names, generators, k, reduction, basis, index, table_q, table_f }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn nilpotency_order(&self) -> u32 {
        self.k
    }

    pub fn reduction(&self) -> &ReductionBasis {
        &self.reduction
    }

    /// Non-pivot monomials of degree `< k`, ascending graded-lex.
    pub fn quotient_basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        self.reduction.normal_form(p)
    }

    /// Quotient-basis coordinates of the class of `p`.
    pub fn coords_of(&self, p: &Polynomial) -> Vec<Q> {
        let nf = self.normal_form(p);
        let mut out = vec![Q::zero(); self.dimension()];
        for (m, c) in nf.terms() {
            out[self.index[m]] = c.clone();
        }
        out
    }

    /// Canonical polynomial representative of given coordinates.
    pub fn polynomial_of(&self, coords: &[Q]) -> Polynomial {
        Polynomial::from_terms(
            self.nvars(),
            self.basis.iter().cloned().zip(coords.iter().cloned()),
        )
    }

    /// Relations plus every degree-`k` monomial they do not already imply,
    /// so the list alone generates the ideal without the `m^k` witness.
    pub fn full_relations(&self) -> Vec<Polynomial> {
        let n = self.nvars();
        let implied = ReductionBasis::build(n, &self.generators, self.k + 1);
        let mut out = self.generators.clone();
        for m in monomials_below(n, self.k + 1).into_iter().filter(|m| m.degree() == self.k) {
            let p = Polynomial::monomial(m, Q::from_integer(1.into()));
            if !implied.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    pub(crate) fn table_q(&self) -> &MulTable<Q> {
        &self.table_q
    }

    pub(crate) fn table_f(&self) -> &MulTable<f64> {
        &self.table_f
    }

    pub fn to_presentation(&self) -> WeilPresentation {
        WeilPresentation {
            variables: self.names.clone(),
            relations: self.generators.iter().map(|g| g.display_with(&self.names)).collect(),
            nilpotency: self.k,
        }
    }

    /// Human-readable basis list, e.g. `[1, x, x^2]`.
    pub fn basis_display(&self) -> Vec<String> {
        self.basis.iter().map(|m| m.display_with(&self.names)).collect()
    }

    /// Same object or structurally equal.
    pub fn same(a: &Arc<WeilAlgebra>, b: &Arc<WeilAlgebra>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl PartialEq for WeilAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.k == other.k && self.reduction == other.reduction
    }
}

impl Eq for WeilAlgebra {}

impl fmt::Debug for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.display_with(&self.names)).collect();
        write!(
            f,
            "WeilAlgebra(vars={:?}, relations={:?}, k={}, dim={})",
            self.names,
            gens,
            self.k,
            self.dimension()
        )
    }
}

/// `W1 (x) W2` together with the bilinear bookkeeping between the product
/// basis `{e_i (x) f_j}` and the quotient basis of the tensor algebra.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub algebra: Arc<WeilAlgebra>,
    pub left: Arc<WeilAlgebra>,
    pub right: Arc<WeilAlgebra>,
    /// `pair_image[i * dim(right) + j]` = coordinates of `e_i * f_j`.
    pair_image: Vec<Vec<Q>>,
    /// Inverse of `pair_image` (rows indexed by tensor basis), when square.
    split: Option<Vec<Vec<Q>>>,
}

impl Tensor {
    pub fn pair_image(&self, i: usize, j: usize) -> &[Q] {
        &self.pair_image[i * self.right.dimension() + j]
    }

    /// Coordinates in the product basis of tensor-basis vector `t`:
    /// `e_t = sum_{i,j} c[i][j] e_i (x) f_j`.
    pub fn split_basis(&self, t: usize) -> Option<Vec<Vec<Q>>> {
        let split = self.split.as_ref()?;
        let d2 = self.right.dimension();
        Some(split[t].chunks(d2).map(<[Q]>::to_vec).collect())
    }

    /// Whether the pair map is a bijection onto the tensor quotient basis.
    pub fn is_bijective(&self) -> bool {
        self.split.is_some()
    }

    /// Rank of the bilinear pair map.
    pub fn pair_rank(&self) -> usize {
        linalg::rank(&self.pair_image)
    }
}

/// Tensor product: variables of `w1` then `w2` (the latter renamed on
/// collision), both full relation lists, nilpotency witness `k1 + k2 - 1`.
pub fn tensor(w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> Tensor {
    let n1 = w1.nvars();
    let n2 = w2.nvars();
    let mut names = w1.names.clone();
    for name in &w2.names {
        let mut candidate = name.clone();
        while names.contains(&candidate) || (w2.names.contains(&candidate) && candidate != *name) {
            candidate.push_str("_2");
        }
        names.push(candidate);
    }
    let n = n1 + n2;
    let gens: Vec<Polynomial> = w1
        .full_relations()
        .iter()
        .map(|g| g.embed(n, 0))
        .chain(w2.full_relations().iter().map(|g| g.embed(n, n1)))
        .collect();
    let k = w1.k + w2.k - 1;
    let algebra = WeilAlgebra::new(names, gens, k).expect("tensor of proper ideals is proper");
    let mut pair_image = Vec::with_capacity(w1.dimension() * w2.dimension());
    for m1 in &w1.basis {
        for m2 in &w2.basis {
            let prod = Polynomial::monomial(m1.concat(m2), Q::from_integer(1.into()));
            pair_image.push(algebra.coords_of(&prod));
        }
    }
    let split = if pair_image.len() == algebra.dimension() {
        // columns of the pair matrix are tensor coordinates; invert its transpose
        let dim = algebra.dimension();
        let transpose: Vec<Vec<Q>> =
            (0..dim).map(|t| pair_image.iter().map(|row| row[t].clone()).collect()).collect();
        linalg::inverse(&transpose).map(|inv| {
            // inv maps tensor coords -> pair coords; row t of the result is inv column t
            (0..dim).map(|t| inv.iter().map(|row| row[t].clone()).collect()).collect()
        })
    } else {
        None
    };
    Tensor { algebra, left: w1.clone(), right: w2.clone(), pair_image, split }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(vars: &[&str], rels: &[&str], k: u32) -> Result<Arc<WeilAlgebra>, WeilError> {
        WeilAlgebra::from_presentation(&WeilPresentation::new(vars.to_vec(), rels.to_vec(), k))
    }

    #[test]
    fn dual_numbers() {
        let w = alg(&["x"], &["x^2"], 2).unwrap();
        assert_eq!(w.dimension(), 2);
        assert_eq!(w.basis_display(), vec!["1", "x"]);
    }

    #[test]
    fn d2() {
        let w = alg(&["x", "y"], &["x^2", "y^2", "x*y"], 2).unwrap();
        assert_eq!(w.dimension(), 3);
        assert_eq!(w.basis_display(), vec!["1", "y", "x"]);
    }

    #[test]
    fn improper() {
        assert!(matches!(alg(&["x"], &["x - 1"], 2), Err(WeilError::ImproperIdeal(_))));
        assert!(matches!(alg(&["x"], &[], 0), Err(WeilError::ZeroNilpotency)));
        assert!(matches!(alg(&["x", "x"], &[], 2), Err(WeilError::DuplicateVariable(_))));
        assert!(matches!(alg(&["x"], &["y"], 2), Err(WeilError::Poly(_))));
    }

    #[test]
    fn binomial_algebra_dimension() {
        let w = alg(&["x", "y"], &["x^2 - y^3"], 4).unwrap();
        assert_eq!(w.dimension(), 10 - 3);
        let w = WeilAlgebra::new(w.names().to_vec(), w.generators().to_vec(), 4).unwrap();
        assert_eq!(w.quotient_basis().len() + w.reduction().len(), monomials_below(2, 4).len());
    }

    #[test]
    fn tensor_examples() {
        let dual = WeilAlgebra::preset("dual").unwrap();
        let t = tensor(&dual, &dual);
        assert_eq!(t.algebra.nilpotency_order(), 3);
        assert_eq!(t.algebra.dimension(), 4);
        assert_eq!(t.algebra.names(), &["x".to_string(), "x_2".to_string()]);
        assert_eq!(t.algebra.basis_display(), vec!["1", "x_2", "x", "x*x_2"]);
        assert!(t.is_bijective());

        let r = WeilAlgebra::real();
        let u = tensor(&dual, &r);
        assert_eq!(*u.algebra, *dual);

        let j2 = alg(&["x"], &["x^3"], 3).unwrap();
        let y2 = alg(&["y"], &["y^2"], 2).unwrap();
        assert_eq!(tensor(&j2, &y2).algebra.dimension(), 6);
    }

    #[test]
    fn tensor_split_inverts_pairs() {
        let a = alg(&["x", "y"], &["x^2 - y^3"], 4).unwrap();
        let b = WeilAlgebra::preset("jet2").unwrap();
        let t = tensor(&a, &b);
        assert_eq!(t.algebra.dimension(), a.dimension() * b.dimension());
        assert!(t.is_bijective());
        for s in 0..t.algebra.dimension() {
            let c = t.split_basis(s).unwrap();
            let mut acc = vec![Q::zero(); t.algebra.dimension()];
            for (i, row) in c.iter().enumerate() {
                for (j, cij) in row.iter().enumerate() {
                    for (slot, v) in acc.iter_mut().zip(t.pair_image(i, j)) {
                        *slot += cij * v;
                    }
                }
            }
            let expect: Vec<Q> = (0..acc.len())
                .map(|u| if u == s { Q::from_integer(1.into()) } else { Q::zero() })
                .collect();
            assert_eq!(acc, expect);
        }
    }
}
