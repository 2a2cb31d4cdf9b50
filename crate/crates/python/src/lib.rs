//! Python bindings: presentations, PBW certificates, normal forms, duals and
//! bar homology. Reports come back as plain dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use operad_pbw::bar::BarComplex;
use operad_pbw::corpus;
use operad_pbw::dual::{dual, find_isomorphism, DualMode};
use operad_pbw::element::display_monomial;
use operad_pbw::format::{parse, parse_element, print};
use operad_pbw::free::pointed_shuffles as shuffles;
use operad_pbw::ideal::{check_pbw, dimension_table, ExactReducer};
use operad_pbw::presentation;
use operad_pbw::rewrite::RewriteSystem;
use operad_pbw::symmetrize::symmetrize;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(runtime_err)?;
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

/// A quadratic presentation together with its monomial order.
#[pyclass(module = "operad_pbw_py", frozen)]
struct Presentation {
    inner: presentation::Presentation,
}

impl Presentation {
    fn split(&self) -> PyResult<RewriteSystem> {
        RewriteSystem::new(&self.inner).map_err(value_err)
    }
}

#[pymethods]
impl Presentation {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Presentation { inner: parse(text).map_err(value_err)? })
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Presentation { inner: corpus::builtin(name).map_err(value_err)? })
    }

    /// A file path or `builtin:<name>`.
    #[staticmethod]
    fn load(source: &str) -> PyResult<Self> {
        Ok(Presentation { inner: corpus::load(source).map_err(value_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// `(name, arity, degree)` per generator.
    #[getter]
    fn generators(&self) -> Vec<(String, usize, i32)> {
        self.inner.gens.generators().iter().map(|g| (g.name.clone(), g.arity, g.degree)).collect()
    }

    #[getter]
    fn relations(&self) -> Vec<String> {
        (0..self.inner.relations.len()).map(|i| self.inner.describe_relation(i)).collect()
    }

    fn text(&self) -> String {
        print(&self.inner)
    }

    fn __str__(&self) -> String {
        print(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("<Presentation {} with {} relations>", self.inner.name, self.inner.relations.len())
    }

    fn quadratic_basis(&self) -> PyResult<Vec<String>> {
        let rs = self.split()?;
        Ok(rs.quadratic_basis().iter().map(|m| display_monomial(rs.gens(), m)).collect())
    }

    fn leading_monomials(&self) -> PyResult<Vec<String>> {
        let rs = self.split()?;
        Ok(rs.leading_monomials().iter().map(|m| display_monomial(rs.gens(), m)).collect())
    }

    /// The PBW certificate up to the given bounds.
    #[pyo3(signature = (max_weight = 3, max_arity = 4))]
    fn check(&self, py: Python<'_>, max_weight: usize, max_arity: usize) -> PyResult<PyObject> {
        let rs = self.split()?;
        let report = py.allow_threads(|| check_pbw(&rs, max_weight, max_arity));
        let obj = to_py(py, &report)?;
        obj.bind(py).set_item("is_pbw", report.is_pbw())?;
        Ok(obj)
    }

    /// `{(s, r): dim}` over the grid.
    #[pyo3(signature = (max_weight, max_arity))]
    fn dims(
        &self,
        py: Python<'_>,
        max_weight: usize,
        max_arity: usize,
    ) -> PyResult<std::collections::BTreeMap<(usize, usize), usize>> {
        let rs = self.split()?;
        let table = py.allow_threads(|| dimension_table(&rs, max_weight, max_arity));
        Ok(table.into_iter().map(|(s, r, d)| ((s, r), d)).collect())
    }

    /// Normal form of a polynomial written in the file syntax.
    #[pyo3(signature = (expr, exact = false))]
    fn normal_form(&self, expr: &str, exact: bool) -> PyResult<String> {
        let rs = self.split()?;
        let x = parse_element(rs.gens(), expr).map_err(value_err)?;
        let y = if exact { ExactReducer::new(&rs).reduce(&x) } else { rs.normal_form(&x).map_err(runtime_err)? };
        Ok(y.display(rs.gens()).to_string())
    }

    /// `mode` is `"kdual"` or `"shriek"`.
    #[pyo3(signature = (mode = "kdual"))]
    fn dual(&self, mode: &str) -> PyResult<Presentation> {
        let mode: DualMode = mode.parse().map_err(PyValueError::new_err)?;
        let rs = self.split()?;
        Ok(Presentation { inner: dual(&rs, mode).map_err(value_err)? })
    }

    fn symmetrize(&self) -> PyResult<Presentation> {
        Ok(Presentation { inner: symmetrize(&self.inner).map_err(value_err)? })
    }

    /// Whether some signed relabeling of generators carries the relation
    /// span of `self` onto that of `other`.
    fn is_isomorphic(&self, other: &Presentation) -> PyResult<bool> {
        Ok(find_isomorphism(&self.inner, &other.inner).map_err(runtime_err)?.is_some())
    }

    #[pyo3(signature = (max_weight, max_arity, cap = 200_000))]
    fn bar_homology(&self, py: Python<'_>, max_weight: usize, max_arity: usize, cap: usize) -> PyResult<PyObject> {
        let rs = self.split()?;
        let report = py.allow_threads(|| BarComplex::new(&rs).homology(max_weight, max_arity, cap));
        let obj = to_py(py, &report)?;
        obj.bind(py).set_item("diagonal", report.is_diagonal())?;
        Ok(obj)
    }
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    corpus::builtin_names()
}

/// Pointed `(m, n, i)` shuffles as lists of images.
#[pyfunction]
fn pointed_shuffles(m: usize, n: usize, i: usize) -> Vec<Vec<u32>> {
    shuffles(m, n, i).iter().map(|w| w.images().to_vec()).collect()
}

#[pymodule]
fn operad_pbw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add_function(wrap_pyfunction!(pointed_shuffles, m)?)?;
    Ok(())
}
