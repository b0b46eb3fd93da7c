use rand::Rng;

use crate::error::{LiftError, ProbeError};
use crate::poly::Monomial;
use crate::prolong::{FragmentSpace, SmoothMap};
use crate::sample;
use crate::weil::{WeilAlgebra, WeilElement};
use crate::Q;

use super::fragment::FragmentElem;
use super::object::DObject;

/// Number of real coordinates of a Euclidean fragment or a finite product
/// of them.
pub fn fragment_width(x: &FragmentSpace) -> Result<usize, ProbeError> {
    match x {
        FragmentSpace::Euclidean(p) => Ok(*p),
        FragmentSpace::Product(xs) => xs.iter().map(fragment_width).sum(),
        other => Err(ProbeError::UnsupportedSpace(other.to_string())),
    }
}

/// A point of `J(X)(C)`: one fragment element per coordinate of `X`.
#[derive(Clone, PartialEq, Debug)]
pub struct JValue {
    object: DObject,
    space: FragmentSpace,
    entries: Vec<FragmentElem>,
}

impl JValue {
    pub fn new(object: &DObject, space: &FragmentSpace, entries: Vec<FragmentElem>) -> Result<JValue, ProbeError> {
        let p = fragment_width(space)?;
        if entries.len() != p {
            return Err(ProbeError::ObjectMismatch(format!("{} entries for a space of width {p}", entries.len())));
        }
        for e in &entries {
            if e.nvars() != object.base_arity() || !WeilAlgebra::same(e.algebra(), object.weil()) {
                return Err(ProbeError::ObjectMismatch("entry does not live over the object".into()));
            }
        }
        Ok(JValue { object: object.clone(), space: space.clone(), entries })
    }

    pub fn object(&self) -> &DObject {
        &self.object
    }

    pub fn space(&self) -> &FragmentSpace {
        &self.space
    }

    pub fn entries(&self) -> &[FragmentElem] {
        &self.entries
    }

    /// Split a value over a product into its factors.
    pub fn split(&self) -> Result<Vec<JValue>, ProbeError> {
        let FragmentSpace::Product(xs) = &self.space else {
            return Err(ProbeError::UnsupportedSpace(format!("{} is not a product", self.space)));
        };
        let mut start = 0;
        xs.iter()
            .map(|x| {
                let w = fragment_width(x)?;
                let v = JValue::new(&self.object, x, self.entries[start..start + w].to_vec());
                start += w;
                v
            })
            .collect()
    }

    /// Pair values over the same object into a value over the product.
    pub fn pair(parts: &[JValue]) -> Result<JValue, ProbeError> {
        let first = parts.first().ok_or_else(|| ProbeError::ObjectMismatch("empty pairing".into()))?;
        let space = FragmentSpace::Product(parts.iter().map(|v| v.space.clone()).collect());
        let entries = parts.iter().flat_map(|v| v.entries.iter().cloned()).collect();
        JValue::new(&first.object, &space, entries)
    }

    /// Largest per-block base degree over all entries.
    pub fn block_degrees(&self) -> Vec<u32> {
        let blocks = self.object.blocks();
        let mut out = vec![0; blocks.len()];
        for e in &self.entries {
            for (o, d) in out.iter_mut().zip(e.block_degrees(blocks)) {
                *o = (*o).max(d);
            }
        }
        out
    }

    /// `DegreeOverflow` if some block exceeds `d`.
    pub fn check_degree(&self, d: u32) -> Result<(), ProbeError> {
        for (block, got) in self.block_degrees().into_iter().enumerate() {
            if got > d {
                return Err(ProbeError::DegreeOverflow { block, got, bound: d });
            }
        }
        Ok(())
    }
}

/// `J(X)(C)` restricted to base degree at most `d` per block: a finite
/// dimensional rational vector space with an explicit basis.
#[derive(Clone, Debug)]
pub struct JSpace {
    object: DObject,
    space: FragmentSpace,
    width: usize,
    degree_bound: u32,
    monomials: Vec<Monomial>,
}

/// Carrier of `J(X)` at `C`, polynomial fragment of degree `<= d`.
pub fn eval_j(x: &FragmentSpace, c: &DObject, d: u32) -> Result<JSpace, ProbeError> {
    let width = fragment_width(x)?;
    Ok(JSpace { object: c.clone(), space: x.clone(), width, degree_bound: d, monomials: c.monomials(d) })
}

impl JSpace {
    pub fn object(&self) -> &DObject {
        &self.object
    }

    pub fn space(&self) -> &FragmentSpace {
        &self.space
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    fn weil_dim(&self) -> usize {
        self.object.weil().dimension()
    }

    /// Enumerated dimension.
    pub fn dimension(&self) -> usize {
        self.width * self.monomials.len() * self.weil_dim()
    }

    /// `p * prod_blocks C(n_b + d, d) * dim W`.
    pub fn dimension_formula(&self) -> u64 {
        self.width as u64 * self.object.monomial_count(self.degree_bound) * self.weil_dim() as u64
    }

    /// `(entry, monomial index, Weil basis index)` of a flat index.
    pub fn locate(&self, k: usize) -> (usize, usize, usize) {
        let w = self.weil_dim();
        let per_entry = self.monomials.len() * w;
        (k / per_entry, (k % per_entry) / w, k % w)
    }

    pub fn basis_vector(&self, k: usize) -> JValue {
        let (r, a, i) = self.locate(k);
        let mut coords = vec![Q::from_integer(0.into()); self.weil_dim()];
        coords[i] = Q::from_integer(1.into());
        let w = WeilElement::from_coords(self.object.weil(), coords).expect("dimension matches");
        self.single(r, &self.monomials[a], w)
    }

    fn single(&self, r: usize, m: &Monomial, w: WeilElement<Q>) -> JValue {
        let n = self.object.base_arity();
        let mut entries = vec![FragmentElem::zero(n, self.object.weil()); self.width];
        entries[r] = FragmentElem::monomial(m.clone(), w);
        JValue { object: self.object.clone(), space: self.space.clone(), entries }
    }

    pub fn basis(&self) -> impl Iterator<Item = JValue> + '_ {
        (0..self.dimension()).map(|k| self.basis_vector(k))
    }

    /// Coordinates of `v`; `DegreeOverflow` if `v` leaves the carrier.
    pub fn coords(&self, v: &JValue) -> Result<Vec<Q>, ProbeError> {
        if v.object != self.object || v.entries.len() != self.width {
            return Err(ProbeError::ObjectMismatch("value does not belong to this carrier".into()));
        }
        v.check_degree(self.degree_bound)?;
        let w = self.weil_dim();
        let mut out = vec![Q::from_integer(0.into()); self.dimension()];
        for (r, e) in v.entries.iter().enumerate() {
            for (m, c) in e.terms() {
                let a = self.monomials.binary_search(m).expect("degree checked");
                for (i, ci) in c.coords().iter().enumerate() {
                    out[(r * self.monomials.len() + a) * w + i] = ci.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[Q]) -> Result<JValue, ProbeError> {
        if coords.len() != self.dimension() {
            return Err(ProbeError::ObjectMismatch(format!("expected {} coordinates", self.dimension())));
        }
        let w = self.weil_dim();
        let n = self.object.base_arity();
        let mut entries = vec![FragmentElem::zero(n, self.object.weil()); self.width];
        for (r, entry) in entries.iter_mut().enumerate() {
            for (a, m) in self.monomials.iter().enumerate() {
                let start = (r * self.monomials.len() + a) * w;
                let c = coords[start..start + w].to_vec();
                entry.add_term(m.clone(), WeilElement::from_coords(self.object.weil(), c)?);
            }
        }
        JValue::new(&self.object, &self.space, entries)
    }

    /// Random element with sparse rational coordinates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> JValue {
        let coords: Vec<Q> = (0..self.dimension())
            .map(|_| if rng.gen_bool(0.6) { Q::from_integer(0.into()) } else { sample::rational(rng) })
            .collect();
        self.from_coords(&coords).expect("dimension matches")
    }
}

/// `J(phi)` at a fixed object: postcomposition with a polynomial map.
#[derive(Clone, Debug)]
pub struct JMap {
    map: SmoothMap,
    object: DObject,
}

pub fn j_on_map(phi: &SmoothMap, c: &DObject) -> Result<JMap, ProbeError> {
    if !phi.is_polynomial() {
        return Err(ProbeError::Lift(LiftError::NonPolynomial(format!("`{phi}` leaves the polynomial fragment"))));
    }
    Ok(JMap { map: phi.clone(), object: c.clone() })
}

impl JMap {
    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn apply(&self, v: &JValue) -> Result<JValue, ProbeError> {
        if v.object != self.object {
            return Err(ProbeError::ObjectMismatch("value lives over a different object".into()));
        }
        let template = FragmentElem::zero(self.object.base_arity(), self.object.weil());
        let out = self.map.eval(&v.entries, &template)?;
        JValue::new(&self.object, &FragmentSpace::Euclidean(self.map.coarity()), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::parse_map;

    #[test]
    fn dimension_examples() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let r1 = FragmentSpace::Euclidean(1);
        let j = eval_j(&r1, &DObject::new(1, &d), 2).unwrap();
        assert_eq!((j.dimension(), j.dimension_formula()), (6, 6));
        let w = WeilAlgebra::preset("d2").unwrap();
        let j = eval_j(&FragmentSpace::Euclidean(2), &DObject::new(0, &w), 4).unwrap();
        assert_eq!(j.dimension(), 2 * w.dimension());
        let j = eval_j(&r1, &DObject::new(2, &WeilAlgebra::real()), 1).unwrap();
        assert_eq!(j.dimension(), 3);
        let prolonged = crate::prolong::prolong_space(&r1, &d);
        assert!(matches!(eval_j(&prolonged, &DObject::new(1, &d), 1), Err(ProbeError::UnsupportedSpace(_))));
    }

    #[test]
    fn coordinates_round_trip() {
        let d = WeilAlgebra::preset("d2").unwrap();
        let j = eval_j(&FragmentSpace::Euclidean(2), &DObject::new(2, &d), 2).unwrap();
        for k in 0..j.dimension() {
            let b = j.basis_vector(k);
            let c = j.coords(&b).unwrap();
            assert_eq!(c.iter().filter(|q| **q != Q::from_integer(0.into())).count(), 1);
            assert_eq!(j.from_coords(&c).unwrap(), b);
        }
    }

    #[test]
    fn product_of_entries() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let c = DObject::new(1, &d);
        let s = FragmentElem::base_var(1, &d, 0);
        let e = FragmentElem::weil_var(1, &d, 0);
        let v = JValue::new(&c, &FragmentSpace::Euclidean(2), vec![s.clone(), e.clone()]).unwrap();
        let m = j_on_map(&parse_map("x*y", None).unwrap(), &c).unwrap();
        let out = m.apply(&v).unwrap();
        assert_eq!(out.entries()[0], s.mul(&e).unwrap());
        assert!(j_on_map(&parse_map("sin(x)", None).unwrap(), &c).is_err());
        let id = j_on_map(&SmoothMap::identity(2), &c).unwrap();
        assert_eq!(id.apply(&v).unwrap().entries(), v.entries());
    }

    #[test]
    fn overflow_is_reported() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let c = DObject::new(1, &d);
        let j = eval_j(&FragmentSpace::Euclidean(1), &c, 1).unwrap();
        let s = FragmentElem::base_var(1, &d, 0);
        let v = JValue::new(&c, &FragmentSpace::Euclidean(1), vec![s.pow(2).unwrap()]).unwrap();
        assert!(matches!(j.coords(&v), Err(ProbeError::DegreeOverflow { got: 2, bound: 1, .. })));
    }
}
