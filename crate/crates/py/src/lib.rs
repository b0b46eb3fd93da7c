//! Python bindings: Weil algebras and their elements, morphisms, jet
//! lifting, equivalence modulo an ideal, and the law-suite runner.
//!
//! Exact coefficients cross the boundary as `"p/q"` strings, which
//! `fractions.Fraction` accepts directly.

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use weilkit::harness::{self, Config};
use weilkit::poly::parse_polynomial;
use weilkit::prolong::{equiv_mod, parse_map, parse_scalar, taylor_lift, SmoothMap};
use weilkit::weil::{self as w, WeilPresentation};
use weilkit::{LiftError, Scalar, Q};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "WeilAlgebra", module = "pyweil", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    inner: Arc<w::WeilAlgebra>,
}

#[pymethods]
impl PyAlgebra {
    /// `R[variables] / (relations + m^nilpotency)`.
    #[new]
    fn new(variables: Vec<String>, relations: Vec<String>, nilpotency: u32) -> PyResult<Self> {
        let pres = WeilPresentation { variables, relations, nilpotency };
        Ok(PyAlgebra { inner: w::WeilAlgebra::from_presentation(&pres).map_err(err)? })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(PyAlgebra { inner: w::WeilAlgebra::preset(name).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let pres = WeilPresentation::load(std::path::Path::new(path)).map_err(err)?;
        Ok(PyAlgebra { inner: w::WeilAlgebra::from_presentation(&pres).map_err(err)? })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn nilpotency_order(&self) -> u32 {
        self.inner.nilpotency_order()
    }

    /// Quotient basis monomials in graded-lex order.
    fn basis(&self) -> Vec<String> {
        self.inner.basis_display()
    }

    /// Canonical normal form of a polynomial in the algebra's variables.
    fn normal_form(&self, poly: &str) -> PyResult<String> {
        let p = parse_polynomial(poly, self.inner.names()).map_err(err)?;
        Ok(self.inner.normal_form(&p).display_with(self.inner.names()))
    }

    fn element(&self, poly: &str) -> PyResult<PyElement> {
        let p = parse_polynomial(poly, self.inner.names()).map_err(err)?;
        Ok(PyElement { inner: w::WeilElement::from_polynomial(&self.inner, &p) })
    }

    fn element_from_coords(&self, coords: Vec<String>) -> PyResult<PyElement> {
        let qs = coords.iter().map(|c| parse_scalar(c)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(PyElement { inner: w::WeilElement::from_coords(&self.inner, qs).map_err(err)? })
    }

    fn one(&self) -> PyElement {
        PyElement { inner: w::WeilElement::one(&self.inner) }
    }

    fn variable(&self, i: usize) -> PyResult<PyElement> {
        if i >= self.inner.nvars() {
            return Err(PyValueError::new_err(format!("variable index {i} out of range")));
        }
        Ok(PyElement { inner: w::WeilElement::variable(&self.inner, i) })
    }

    /// Tensor product; the right factor's variables are renamed on clashes.
    fn tensor(&self, other: &PyAlgebra) -> PyAlgebra {
        PyAlgebra { inner: w::tensor(&self.inner, &other.inner).algebra }
    }

    fn __repr__(&self) -> String {
        format!(
            "WeilAlgebra(dim={}, basis=[{}], k={})",
            self.inner.dimension(),
            self.inner.basis_display().join(", "),
            self.inner.nilpotency_order()
        )
    }
}

#[pyclass(name = "Element", module = "pyweil", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    inner: w::WeilElement<Q>,
}

fn arith(e: weilkit::WeilError) -> PyErr {
    PyArithmeticError::new_err(e.to_string())
}

#[pymethods]
impl PyElement {
    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra { inner: self.inner.algebra().clone() }
    }

    /// Exact coordinates over the quotient basis, as `"p/q"` strings.
    fn coords(&self) -> Vec<String> {
        self.inner.coords().iter().map(Scalar::render).collect()
    }

    fn float_coords(&self) -> Vec<f64> {
        self.inner.coords().iter().map(Scalar::as_f64).collect()
    }

    /// Nonzero `(monomial, coefficient)` pairs in graded-lex order.
    fn terms(&self) -> Vec<(String, String)> {
        self.inner.serialize_terms()
    }

    fn augmentation(&self) -> String {
        self.inner.augmentation().render()
    }

    fn inverse(&self) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.inverse().map_err(arith)? })
    }

    fn __add__(&self, o: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.add(&o.inner).map_err(arith)? })
    }

    fn __sub__(&self, o: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.sub(&o.inner).map_err(arith)? })
    }

    fn __mul__(&self, o: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.mul(&o.inner).map_err(arith)? })
    }

    fn __neg__(&self) -> PyElement {
        PyElement { inner: self.inner.neg() }
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.pow(e).map_err(arith)? })
    }

    fn __eq__(&self, o: &PyElement) -> bool {
        self.inner == o.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }
}

#[pyclass(name = "WeilMorphism", module = "pyweil", frozen, skip_from_py_object)]
struct PyMorphism {
    inner: w::WeilMorphism,
}

#[pymethods]
impl PyMorphism {
    /// One polynomial in the target's variables per source variable.
    #[new]
    fn new(source: &PyAlgebra, target: &PyAlgebra, components: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = components.iter().map(String::as_str).collect();
        Ok(PyMorphism { inner: w::WeilMorphism::parse(&source.inner, &target.inner, &refs).map_err(err)? })
    }

    #[staticmethod]
    fn identity(a: &PyAlgebra) -> PyMorphism {
        PyMorphism { inner: w::WeilMorphism::identity(&a.inner) }
    }

    fn apply(&self, e: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.apply(&e.inner).map_err(err)? })
    }

    fn then(&self, next: &PyMorphism) -> PyResult<PyMorphism> {
        Ok(PyMorphism { inner: self.inner.then(&next.inner).map_err(err)? })
    }

    fn same_action(&self, other: &PyMorphism) -> bool {
        self.inner.same_action(&other.inner)
    }

    fn components(&self) -> Vec<String> {
        self.inner.display_components()
    }
}

fn lift_at<S: Scalar>(
    f: &SmoothMap,
    a: &Arc<w::WeilAlgebra>,
    at: &[Q],
) -> Result<Vec<w::WeilElement<S>>, LiftError> {
    let point: Vec<w::WeilElement<S>> = at
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let c = w::WeilElement::constant(a, S::from_rational(q));
            if i < a.nvars() {
                c.add(&w::WeilElement::variable(a, i)).expect("same algebra")
            } else {
                c
            }
        })
        .collect();
    taylor_lift(f, a, &point)
}

fn parse_at(at: &[String]) -> PyResult<Vec<Q>> {
    at.iter().map(|s| parse_scalar(s)).collect::<Result<_, _>>().map_err(err)
}

/// Lift `expr` at `at + (x_1, ..., x_n)`; exact when no transcendental
/// value is needed, otherwise in floating point. Returns the terms of
/// each output component.
#[pyfunction]
fn lift(algebra: &PyAlgebra, expr: &str, at: Vec<String>) -> PyResult<Vec<Vec<(String, String)>>> {
    let at = parse_at(&at)?;
    let f = parse_map(expr, Some(at.len())).map_err(err)?;
    let terms = |v: Vec<w::WeilElement<_>>| v.iter().map(|e| e.serialize_terms()).collect::<Vec<_>>();
    match lift_at::<Q>(&f, &algebra.inner, &at) {
        Ok(v) => Ok(terms(v)),
        Err(LiftError::Inexact { .. }) => {
            let v = lift_at::<f64>(&f, &algebra.inner, &at).map_err(err)?;
            Ok(v.iter().map(|e| e.serialize_terms()).collect())
        }
        Err(e) => Err(err(e)),
    }
}

/// `f(a), f'(a), ..., f^(order)(a)` in floating point.
#[pyfunction]
fn derive(order: u32, expr: &str, at: &str) -> PyResult<Vec<f64>> {
    if order > 12 {
        return Err(PyValueError::new_err("order is limited to 12"));
    }
    let a = parse_scalar(at).map_err(err)?;
    let f = parse_map(expr, Some(1)).map_err(err)?;
    let jet = lift_at::<f64>(&f, &w::WeilAlgebra::jet(order), &[a]).map_err(err)?.remove(0);
    let mut fact = 1.0;
    Ok(jet
        .coords()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j > 0 {
                fact *= j as f64;
            }
            c * fact
        })
        .collect())
}

/// Whether `f` and `g` agree modulo the ideal of the algebra.
#[pyfunction]
fn equiv(algebra: &PyAlgebra, f: &str, g: &str) -> PyResult<bool> {
    let n = algebra.inner.nvars();
    let f = parse_map(f, Some(n)).map_err(err)?;
    let g = parse_map(g, Some(n)).map_err(err)?;
    match equiv_mod::<Q>(&f, &g, &algebra.inner) {
        Ok(r) => Ok(r.is_none()),
        Err(LiftError::Inexact { .. }) => Ok(equiv_mod::<f64>(&f, &g, &algebra.inner).map_err(err)?.is_none()),
        Err(e) => Err(err(e)),
    }
}

/// Run the suites of a JSON config and return the report as JSON.
#[pyfunction]
fn run_suite(config_json: &str) -> PyResult<String> {
    let cfg = Config::parse(config_json, None).map_err(err)?;
    Ok(harness::run_suite(&cfg).map_err(err)?.to_json())
}

/// Re-run one case of a named check; returns the single-case report as JSON.
#[pyfunction]
fn replay(config_json: &str, check: &str, case_seed: u64) -> PyResult<String> {
    let cfg = Config::parse(config_json, None).map_err(err)?;
    let r = harness::replay(&cfg, check, case_seed).map_err(err)?;
    serde_json::to_string_pretty(&r).map_err(err)
}

#[pymodule]
fn pyweil(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyMorphism>()?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(equiv, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
