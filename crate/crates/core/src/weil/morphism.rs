use std::sync::Arc;

use num_traits::Zero;

use crate::error::WeilError;
use crate::poly::{monomials_below, Monomial, Polynomial};
use crate::scalar::Scalar;
use crate::Q;

use super::algebra::WeilAlgebra;
use super::element::WeilElement;

/// An algebra map `W1 -> W2` represented by a polynomial map
/// `psibar : R^m -> R^n` (one polynomial in the target's variables per
/// source variable), acting by substitution.
#[derive(Clone, Debug)]
pub struct WeilMorphism {
    source: Arc<WeilAlgebra>,
    target: Arc<WeilAlgebra>,
    psibar: Vec<Polynomial>,
    /// Target coordinates of the image of each source basis monomial.
    images: Vec<Vec<Q>>,
}

impl WeilMorphism {
    /// Validate `psibar` against both morphism conditions.
    ///
    /// Condition 2 is checked on the relation list and on the degree-`k`
    /// monomials of the source, which together generate its ideal.
    pub fn new(
        source: &Arc<WeilAlgebra>,
        target: &Arc<WeilAlgebra>,
        psibar: Vec<Polynomial>,
    ) -> Result<WeilMorphism, WeilError> {
        if psibar.len() != source.nvars() {
            return Err(WeilError::ComponentCount { expected: source.nvars(), got: psibar.len() });
        }
        let kt = target.nilpotency_order();
        let mut psibar_t = Vec::with_capacity(psibar.len());
        for (index, p) in psibar.iter().enumerate() {
            if p.nvars() != target.nvars() {
                return Err(WeilError::Poly(crate::poly::PolyError::VarCountMismatch {
                    left: target.nvars(),
                    right: p.nvars(),
                }));
            }
            let c = p.constant_term();
            if !c.is_zero() {
                return Err(WeilError::BasePointViolation { index, constant: c.to_string() });
            }
            psibar_t.push(p.truncate(kt));
        }
        let compose = |g: &Polynomial| -> Result<Polynomial, WeilError> {
            Ok(target.normal_form(&g.substitute_into(&psibar_t, target.nvars(), Some(kt))?))
        };
        let ks = source.nilpotency_order();
        let power_gens = monomials_of_degree(source.nvars(), ks)
            .into_iter()
            .map(|m| Polynomial::monomial(m, Q::from_integer(1.into())));
        for g in source.generators().iter().cloned().chain(power_gens) {
            let nf = compose(&g)?;
            if !nf.is_zero() {
                return Err(WeilError::IdealViolation {
                    generator: g.display_with(source.names()),
                    normal_form: nf.display_with(target.names()),
                });
            }
        }
        let images = source
            .quotient_basis()
            .iter()
            .map(|m| {
                let p = Polynomial::monomial(m.clone(), Q::from_integer(1.into()));
                Ok(target.coords_of(&compose(&p)?))
            })
            .collect::<Result<Vec<_>, WeilError>>()?;
        Ok(WeilMorphism { source: source.clone(), target: target.clone(), psibar: psibar_t, images })
    }

    /// Parse components over the target's variable names.
    pub fn parse(
        source: &Arc<WeilAlgebra>,
        target: &Arc<WeilAlgebra>,
        components: &[&str],
    ) -> Result<WeilMorphism, WeilError> {
        let psibar = components
            .iter()
            .map(|c| crate::poly::parse_polynomial(c, target.names()))
            .collect::<Result<Vec<_>, _>>()?;
        WeilMorphism::new(source, target, psibar)
    }

    pub fn identity(w: &Arc<WeilAlgebra>) -> WeilMorphism {
        let n = w.nvars();
        WeilMorphism::new(w, w, (0..n).map(|i| Polynomial::var(n, i)).collect())
            .expect("identity is a morphism")
    }

    /// The morphism factoring through `R`: every variable goes to 0.
    pub fn zero(source: &Arc<WeilAlgebra>, target: &Arc<WeilAlgebra>) -> WeilMorphism {
        let psibar = vec![Polynomial::zero(target.nvars()); source.nvars()];
        WeilMorphism::new(source, target, psibar).expect("zero map is a morphism")
    }

    pub fn source(&self) -> &Arc<WeilAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<WeilAlgebra> {
        &self.target
    }

    pub fn psibar(&self) -> &[Polynomial] {
        &self.psibar
    }

    /// `W1 -> W2` on elements: substitute, then reduce in the target.
    pub fn apply<S: Scalar>(&self, a: &WeilElement<S>) -> Result<WeilElement<S>, WeilError> {
        if !WeilAlgebra::same(a.algebra(), &self.source) {
            return Err(WeilError::AlgebraMismatch);
        }
        let mut out = vec![S::zero(); self.target.dimension()];
        for (ai, img) in a.coords().iter().zip(&self.images) {
            if ai.is_zero() {
                continue;
            }
            for (slot, c) in out.iter_mut().zip(img) {
                if !c.is_zero() {
                    *slot = slot.plus(&ai.times(&S::from_rational(c)));
                }
            }
        }
        WeilElement::from_coords(&self.target, out)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &WeilMorphism) -> Result<WeilMorphism, WeilError> {
        if !WeilAlgebra::same(&self.target, &next.source) {
            return Err(WeilError::EndpointMismatch);
        }
        let t = &next.target;
        let psibar = self
            .psibar
            .iter()
            .map(|p| p.substitute_into(&next.psibar, t.nvars(), Some(t.nilpotency_order())))
            .collect::<Result<Vec<_>, _>>()?;
        WeilMorphism::new(&self.source, t, psibar)
    }

    /// Equal representatives `psibar` (after truncation at the target order).
    pub fn same_representative(&self, other: &WeilMorphism) -> bool {
        WeilAlgebra::same(&self.source, &other.source)
            && WeilAlgebra::same(&self.target, &other.target)
            && self.psibar == other.psibar
    }

    /// Equal action on every source basis element.
    pub fn same_action(&self, other: &WeilMorphism) -> bool {
        WeilAlgebra::same(&self.source, &other.source)
            && WeilAlgebra::same(&self.target, &other.target)
            && self.images == other.images
    }

    /// `id_V (x) psi : V (x) W1 -> V (x) W2`, on the tensor algebras built by
    /// [`super::tensor`].
    pub fn tensor_left(v: &Arc<WeilAlgebra>, psi: &WeilMorphism) -> Result<WeilMorphism, WeilError> {
        let src = super::tensor(v, &psi.source).algebra;
        let tgt = super::tensor(v, &psi.target).algebra;
        let nv = v.nvars();
        let nt = tgt.nvars();
        let mut psibar: Vec<Polynomial> = (0..nv).map(|i| Polynomial::var(nt, i)).collect();
        psibar.extend(psi.psibar.iter().map(|p| p.embed(nt, nv)));
        WeilMorphism::new(&src, &tgt, psibar)
    }

    pub fn display_components(&self) -> Vec<String> {
        self.psibar.iter().map(|p| p.display_with(self.target.names())).collect()
    }
}

/// Monomials of degree exactly `k` in `n` variables.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Monomial> {
    monomials_below(n, k + 1).into_iter().filter(|m| m.degree() == k).collect()
}
