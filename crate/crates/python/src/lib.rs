//! Python bindings. Every object carries its genus; text uses the same
//! notation as the command-line tool (`1/2 d1^2 - 1/6 l4 z1^2`).

use heatlie::derivations::DerivationTable;
use heatlie::fixtures::FixtureSet;
use heatlie::psi::PsiPoly as CorePsi;
use heatlie::suite::run_suite;
use heatlie::text::{parse, parse_vector_field};
use heatlie::verify::express_in_l_basis;
use heatlie::{
    build_l, build_q, GenusContext, JsonForm, LambdaPoly as CoreLambda, LambdaVectorField, SchrodingerOperator,
    WeylOperator as CoreWeyl,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ctx(genus: i64) -> PyResult<GenusContext> {
    GenusContext::new(genus).map_err(err)
}

/// Polynomial in the curve parameters λ with rational coefficients.
#[pyclass(name = "LambdaPoly", module = "heatlie_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct LambdaPoly(CoreLambda);

#[pymethods]
impl LambdaPoly {
    #[new]
    fn new(genus: u32, text: &str) -> PyResult<Self> {
        Ok(Self(parse(genus, text).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(Self(CoreLambda::from_json_str(doc).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn derivative(&self, index: i64) -> Self {
        Self(self.0.derivative(index))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_add(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_sub(&other.0).map_err(err)?))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_mul(&other.0).map_err(err)?))
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("LambdaPoly({}, '{}')", self.0.genus(), self.0.render())
    }
}

/// Normal-ordered differential operator in z with λ-polynomial coefficients.
#[pyclass(name = "WeylOperator", module = "heatlie_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct WeylOperator(CoreWeyl);

#[pymethods]
impl WeylOperator {
    #[new]
    fn new(genus: u32, text: &str) -> PyResult<Self> {
        Ok(Self(parse(genus, text).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(Self(CoreWeyl::from_json_str(doc).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    /// Common weight of all terms; `None` for zero, error if inhomogeneous.
    fn weight(&self) -> PyResult<Option<i64>> {
        self.0.homogeneous_weight().map_err(|_| PyValueError::new_err("operator is not homogeneous"))
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.compose(&other.0).map_err(err)?))
    }

    fn commutator(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.commutator(&other.0).map_err(err)?))
    }

    /// Apply to a polynomial in z (an operator of order 0).
    fn apply(&self, f: &Self) -> PyResult<Self> {
        Ok(Self(self.0.apply(&f.0).map_err(err)?))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_add(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_sub(&other.0).map_err(err)?))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("WeylOperator({}, '{}')", self.0.genus(), self.0.render())
    }
}

/// Vector field `Σ c_N ∂/∂λ_N`.
#[pyclass(name = "VectorField", module = "heatlie_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct VectorField(LambdaVectorField);

#[pymethods]
impl VectorField {
    #[new]
    fn new(genus: u32, text: &str) -> PyResult<Self> {
        Ok(Self(parse_vector_field(genus, text).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(Self(LambdaVectorField::from_json_str(doc).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    fn bracket(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.bracket(&other.0).map_err(err)?))
    }

    fn apply(&self, p: &LambdaPoly) -> PyResult<LambdaPoly> {
        Ok(LambdaPoly(self.0.apply(&p.0).map_err(err)?))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("VectorField({}, '{}')", self.0.genus(), self.0.render())
    }
}

/// `Q = L − H`.
#[pyclass(name = "SchrodingerOperator", module = "heatlie_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Schrodinger(SchrodingerOperator);

#[pymethods]
impl Schrodinger {
    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(Self(SchrodingerOperator::from_json_str(doc).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    #[getter]
    fn weight(&self) -> i64 {
        self.0.weight
    }

    #[getter]
    fn l(&self) -> VectorField {
        VectorField(self.0.l_part.clone())
    }

    #[getter]
    fn h(&self) -> WeylOperator {
        WeylOperator(self.0.h_part.clone())
    }

    fn commutator(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.commutator(&other.0).map_err(err)?))
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("SchrodingerOperator(genus={}, weight={})", self.0.genus(), self.0.weight)
    }
}

/// Polynomial in the logarithmic derivatives ψ and in z.
#[pyclass(name = "PsiPoly", module = "heatlie_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PsiPoly(CorePsi);

#[pymethods]
impl PsiPoly {
    #[new]
    fn new(genus: u32, text: &str) -> PyResult<Self> {
        Ok(Self(parse(genus, text).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(Self(CorePsi::from_json_str(doc).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    /// Highest number of ψ factors in any term.
    fn psi_degree(&self) -> u32 {
        self.0.psi_degree()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("PsiPoly({}, '{}')", self.0.genus(), self.0.render())
    }
}

#[pyfunction]
fn l_field(genus: i64, k: i64) -> PyResult<VectorField> {
    Ok(VectorField(build_l(&ctx(genus)?, k).map_err(err)?))
}

#[pyfunction]
fn q_operator(genus: i64, k: i64) -> PyResult<Schrodinger> {
    Ok(Schrodinger(build_q(&ctx(genus)?, k).map_err(err)?))
}

#[pyfunction]
fn h_operator(genus: i64, k: i64) -> PyResult<WeylOperator> {
    Ok(WeylOperator(build_q(&ctx(genus)?, k).map_err(err)?.h_part))
}

/// Coefficients `c_k` with `V = Σ c_k L_{2k}`.
#[pyfunction]
fn expand_in_l_basis(v: &VectorField) -> PyResult<Vec<LambdaPoly>> {
    let c = ctx(v.0.genus() as i64)?;
    Ok(express_in_l_basis(&c, &v.0).map_err(err)?.into_iter().map(LambdaPoly).collect())
}

/// `𝓛_{2k}` rendered as text and `w_{2k,j}` for every odd `j`.
#[pyfunction]
fn derive(py: Python<'_>, genus: i64, k: usize) -> PyResult<(String, Py<PyDict>)> {
    let c = ctx(genus)?;
    if k >= c.rank() {
        return Err(PyValueError::new_err(format!("k = {k} is out of range for genus {genus}")));
    }
    let table = DerivationTable::compute(&c).map_err(err)?;
    let ws = PyDict::new(py);
    for (&(two_k, j), w) in &table.w {
        if two_k as usize == 2 * k {
            ws.set_item(j, PsiPoly(w.clone()))?;
        }
    }
    Ok((table.operators[k].render(), ws.unbind()))
}

/// Run the verification suite; returns (all passed, list of check dicts).
#[pyfunction]
fn verify(py: Python<'_>, genus: i64) -> PyResult<(bool, Vec<Py<PyDict>>)> {
    let c = ctx(genus)?;
    let tables = FixtureSet::embedded(c.genus()).transpose().map_err(err)?;
    let report = run_suite(&c, tables.as_ref()).map_err(err)?;
    let mut out = Vec::new();
    for s in &report.suites {
        for r in &s.records {
            let d = PyDict::new(py);
            d.set_item("suite", s.name)?;
            d.set_item("check", &r.check)?;
            d.set_item("subject", &r.subject)?;
            d.set_item("passed", r.passed)?;
            d.set_item("detail", r.detail.as_deref())?;
            out.push(d.unbind());
        }
    }
    Ok((report.passed(), out))
}

#[pymodule]
fn heatlie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LambdaPoly>()?;
    m.add_class::<WeylOperator>()?;
    m.add_class::<VectorField>()?;
    m.add_class::<Schrodinger>()?;
    m.add_class::<PsiPoly>()?;
    m.add_function(wrap_pyfunction!(l_field, m)?)?;
    m.add_function(wrap_pyfunction!(h_operator, m)?)?;
    m.add_function(wrap_pyfunction!(q_operator, m)?)?;
    m.add_function(wrap_pyfunction!(expand_in_l_basis, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
