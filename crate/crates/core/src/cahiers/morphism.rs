use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{ProbeError, WeilError};
use crate::poly::Polynomial;
use crate::prolong::FragmentSpace;
use crate::report::{run_cases_counting, CheckReport, Failure};
use crate::sample;
use crate::weil::{WeilAlgebra, WeilElement};
use crate::Q;

use super::fragment::{eval_polynomial, FragmentElem};
use super::jspace::{eval_j, JSpace, JValue};
use super::object::DObject;

/// An arrow `C -> C'` out of `C^inf(R^n) (x) W`, given by the images of the
/// base coordinates and of the Weil variables. The Weil images must send
/// every relation of `W` to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DMorphism {
    source: DObject,
    target: DObject,
    base_part: Vec<FragmentElem>,
    weil_part: Vec<FragmentElem>,
}

impl DMorphism {
    pub fn new(
        source: &DObject,
        target: &DObject,
        base_part: Vec<FragmentElem>,
        weil_part: Vec<FragmentElem>,
    ) -> Result<DMorphism, ProbeError> {
        if base_part.len() != source.base_arity() {
            return Err(ProbeError::InvalidMorphism(format!(
                "{} base images for {} base variables",
                base_part.len(),
                source.base_arity()
            )));
        }
        if weil_part.len() != source.weil().nvars() {
            return Err(ProbeError::InvalidMorphism(format!(
                "{} Weil images for {} Weil variables",
                weil_part.len(),
                source.weil().nvars()
            )));
        }
        for e in base_part.iter().chain(&weil_part) {
            if e.nvars() != target.base_arity() || !WeilAlgebra::same(e.algebra(), target.weil()) {
                return Err(ProbeError::InvalidMorphism("image does not live over the target".into()));
            }
        }
        let one = FragmentElem::constant(target.base_arity(), WeilElement::one(target.weil()));
        for g in source.weil().full_relations() {
            let img = eval_polynomial(&g, &weil_part, &one)?;
            if !img.is_zero() {
                return Err(ProbeError::InvalidMorphism(format!(
                    "relation `{}` maps to `{img}`",
                    g.display_with(source.weil().names())
                )));
            }
        }
        Ok(DMorphism { source: source.clone(), target: target.clone(), base_part, weil_part })
    }

    pub fn identity(c: &DObject) -> DMorphism {
        let n = c.base_arity();
        let base = (0..n).map(|i| FragmentElem::base_var(n, c.weil(), i)).collect();
        let weil = (0..c.weil().nvars()).map(|j| FragmentElem::weil_var(n, c.weil(), j)).collect();
        DMorphism::new(c, c, base, weil).expect("identity is valid")
    }

    pub fn source(&self) -> &DObject {
        &self.source
    }

    pub fn target(&self) -> &DObject {
        &self.target
    }

    pub fn base_part(&self) -> &[FragmentElem] {
        &self.base_part
    }

    pub fn weil_part(&self) -> &[FragmentElem] {
        &self.weil_part
    }

    /// Image of an element of the source fragment.
    pub fn apply_to_elem(&self, e: &FragmentElem) -> Result<FragmentElem, WeilError> {
        if e.nvars() != self.source.base_arity() || !WeilAlgebra::same(e.algebra(), self.source.weil()) {
            return Err(WeilError::AlgebraMismatch);
        }
        e.substitute(self.target.base_arity(), self.target.weil(), &self.base_part, &self.weil_part)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DMorphism) -> Result<DMorphism, ProbeError> {
        if self.target != next.source {
            return Err(ProbeError::ObjectMismatch("morphisms are not composable".into()));
        }
        let map = |v: &[FragmentElem]| v.iter().map(|e| next.apply_to_elem(e)).collect::<Result<Vec<_>, _>>();
        DMorphism::new(&self.source, &next.target, map(&self.base_part)?, map(&self.weil_part)?)
    }
}

/// The candidate action `J(X)(C) -> J(X)(C')` of an arrow `C -> C'`:
/// apply the arrow to every entry, refusing to leave the degree bound.
#[derive(Clone, Debug)]
pub struct InducedAction {
    rho: DMorphism,
    source: JSpace,
    target: JSpace,
}

pub fn induced_action(x: &FragmentSpace, rho: &DMorphism, d: u32) -> Result<InducedAction, ProbeError> {
    Ok(InducedAction { rho: rho.clone(), source: eval_j(x, &rho.source, d)?, target: eval_j(x, &rho.target, d)? })
}

impl InducedAction {
    pub fn source(&self) -> &JSpace {
        &self.source
    }

    pub fn target(&self) -> &JSpace {
        &self.target
    }

    pub fn apply(&self, v: &JValue) -> Result<JValue, ProbeError> {
        if v.object() != self.source.object() {
            return Err(ProbeError::ObjectMismatch("value lives over a different object".into()));
        }
        v.check_degree(self.source.degree_bound())?;
        let entries = v.entries().iter().map(|e| self.rho.apply_to_elem(e)).collect::<Result<Vec<_>, _>>()?;
        let out = JValue::new(self.target.object(), v.space(), entries)?;
        out.check_degree(self.target.degree_bound())?;
        Ok(out)
    }
}

/// Presets the probe draws Weil factors from.
pub const PROBE_ALGEBRAS: [&str; 4] = ["real", "dual", "jet2", "d2"];

pub fn random_object<R: Rng + ?Sized>(rng: &mut R, max_arity: usize, algebras: &[Arc<WeilAlgebra>]) -> DObject {
    DObject::new(rng.gen_range(0..=max_arity), algebras.choose(rng).expect("non-empty"))
}

/// Random target fragment element of base degree at most one.
fn affine<R: Rng + ?Sized>(rng: &mut R, target: &DObject, constant: bool) -> FragmentElem {
    let m = target.base_arity();
    let w = target.weil();
    let mut e = FragmentElem::zero(m, w);
    if constant {
        e = e.add(&FragmentElem::constant(m, WeilElement::constant(w, sample::rational(rng)))).unwrap();
    }
    for i in 0..m {
        if rng.gen_bool(0.6) {
            let c = WeilElement::constant(w, sample::rational(rng));
            e = e.add(&FragmentElem::base_var(m, w, i).scale_weil(&c).unwrap()).unwrap();
        }
    }
    if rng.gen_bool(0.4) {
        let nil = sample::element::<Q, R>(rng, w).nilpotent_part();
        e = e.add(&FragmentElem::constant(m, nil)).unwrap();
    }
    e
}

/// Random arrow `source -> target`, drawn as a base substitution, a Weil
/// morphism, or a mix whose Weil images also depend on base variables.
pub fn random_dmorphism<R: Rng + ?Sized>(rng: &mut R, source: &DObject, target: &DObject) -> DMorphism {
    let m = target.base_arity();
    let psi = sample::morphism(rng, source.weil(), target.weil());
    let lift = |p: &Polynomial| {
        FragmentElem::constant(m, WeilElement::from_polynomial(target.weil(), p))
    };
    let weil_plain: Vec<FragmentElem> = psi.psibar().iter().map(lift).collect();
    let kind = rng.gen_range(0..3);
    let base: Vec<FragmentElem> = (0..source.base_arity())
        .map(|_| if kind == 1 { affine(rng, target, false) } else { affine(rng, target, true) })
        .collect();
    if kind == 2 && m > 0 {
        for _ in 0..4 {
            let weil: Vec<FragmentElem> = weil_plain
                .iter()
                .map(|e| {
                    let factor = affine(rng, target, true);
                    e.mul(&factor).unwrap()
                })
                .collect();
            if let Ok(rho) = DMorphism::new(source, target, base.clone(), weil) {
                return rho;
            }
        }
    }
    DMorphism::new(source, target, base, weil_plain).expect("Weil morphism images annihilate the ideal")
}

/// Outcome label of a functoriality probe.
pub fn probe_outcome(report: &CheckReport) -> &'static str {
    if report.failures == 0 {
        "evidence-for"
    } else {
        "counterexample"
    }
}

/// One probe case: identity law on `C`, and composition law on a random
/// composable pair `C -> C' -> C''`, applied to a random carrier value.
/// `Ok(false)` means the case was inconclusive because of the degree bound.
pub fn probe_case<R: Rng + ?Sized>(rng: &mut R, x: &FragmentSpace, d: u32) -> Result<bool, Failure> {
    let algebras: Vec<Arc<WeilAlgebra>> =
        PROBE_ALGEBRAS.iter().map(|n| WeilAlgebra::preset(n).expect("preset")).collect();
    let c = random_object(rng, 2, &algebras);
    let c1 = random_object(rng, 2, &algebras);
    let c2 = random_object(rng, 2, &algebras);
    let rho = random_dmorphism(rng, &c, &c1);
    let rho2 = random_dmorphism(rng, &c1, &c2);
    let v = eval_j(x, &c, d)?.sample(rng);

    let id = induced_action(x, &DMorphism::identity(&c), d)?;
    if id.apply(&v)? != v {
        return Err(Failure::new("identity arrow does not act as the identity").with("value", format!("{v:?}")));
    }
    let composite = rho.then(&rho2)?;
    let one_step = induced_action(x, &composite, d)?.apply(&v);
    let two_steps = induced_action(x, &rho, d)?.apply(&v).and_then(|w| induced_action(x, &rho2, d)?.apply(&w));
    match (one_step, two_steps) {
        (Ok(a), Ok(b)) if a == b => Ok(true),
        (Ok(a), Ok(b)) => Err(Failure::new("action of a composite differs from the composite of actions")
            .with("value", format!("{v:?}"))
            .with("composite", format!("{a:?}"))
            .with("stepwise", format!("{b:?}"))),
        (Err(ProbeError::DegreeOverflow { .. }), _) | (_, Err(ProbeError::DegreeOverflow { .. })) => Ok(false),
        (Err(e), _) | (_, Err(e)) => Err(Failure::from(e)),
    }
}

/// Run the functoriality probe on `cases` random composable pairs.
pub fn probe_functoriality(x: &FragmentSpace, d: u32, cases: usize, seed: u64) -> CheckReport {
    let mut report = run_cases_counting("conjecture_probe", seed, cases, |rng| probe_case(rng, x, d));
    report.outcome = Some(probe_outcome(&report).to_string());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_acts_trivially() {
        let d = WeilAlgebra::preset("d2").unwrap();
        let c = DObject::new(2, &d);
        let x = FragmentSpace::Euclidean(2);
        let act = induced_action(&x, &DMorphism::identity(&c), 2).unwrap();
        for b in act.source().basis() {
            assert_eq!(act.apply(&b).unwrap(), b);
        }
    }

    #[test]
    fn base_square_substitution() {
        let r = WeilAlgebra::real();
        let c = DObject::new(1, &r);
        let s = FragmentElem::base_var(1, &r, 0);
        let rho = DMorphism::new(&c, &c, vec![s.pow(2).unwrap()], vec![]).unwrap();
        let x = FragmentSpace::Euclidean(1);
        let v = JValue::new(&c, &x, vec![s.clone()]).unwrap();
        assert_eq!(induced_action(&x, &rho, 2).unwrap().apply(&v).unwrap().entries()[0], s.pow(2).unwrap());
        assert!(matches!(
            induced_action(&x, &rho, 1).unwrap().apply(&v),
            Err(ProbeError::DegreeOverflow { got: 2, bound: 1, .. })
        ));
    }

    #[test]
    fn invalid_weil_images_are_rejected() {
        let d = WeilAlgebra::preset("dual").unwrap();
        let r = WeilAlgebra::real();
        let src = DObject::new(0, &d);
        let tgt = DObject::new(1, &r);
        let s = FragmentElem::base_var(1, &r, 0);
        assert!(matches!(DMorphism::new(&src, &tgt, vec![], vec![s]), Err(ProbeError::InvalidMorphism(_))));
    }

    #[test]
    fn composition_stays_valid() {
        let mut rng = crate::report::case_rng(11);
        let algebras: Vec<_> = PROBE_ALGEBRAS.iter().map(|n| WeilAlgebra::preset(n).unwrap()).collect();
        for _ in 0..30 {
            let a = random_object(&mut rng, 2, &algebras);
            let b = random_object(&mut rng, 2, &algebras);
            let c = random_object(&mut rng, 2, &algebras);
            let f = random_dmorphism(&mut rng, &a, &b);
            let g = random_dmorphism(&mut rng, &b, &c);
            f.then(&g).unwrap();
            assert_eq!(DMorphism::identity(&a).then(&f).unwrap(), f);
        }
    }

    #[test]
    fn probe_reports_evidence() {
        let report = probe_functoriality(&FragmentSpace::Euclidean(1), 3, 40, 5);
        assert_eq!(report.outcome.as_deref(), Some("evidence-for"), "{report:?}");
        assert!(report.skipped < 40);
    }
}
