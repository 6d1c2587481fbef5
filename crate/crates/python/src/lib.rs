//! Python bindings: variety specs, Hilbert series, catalog entries, Molien
//! dimensions and the verification suite.

use std::time::Duration;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use symtensor::catalog::{self, ComputeConfig};
use symtensor::error::Error;
use symtensor::groebner::Limits;
use symtensor::hilbert::{self, MonomialIdeal};
use symtensor::invariants;

create_exception!(symtensor_py, SymtensorError, PyException);
create_exception!(symtensor_py, LimitExceededError, SymtensorError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        Error::LimitExceeded(_) => LimitExceededError::new_err(e.to_string()),
        _ => SymtensorError::new_err(e.to_string()),
    }
}

fn config(max_degree: usize, gb_max_degree: u32, timeout: f64, force: bool) -> PyResult<ComputeConfig> {
    if !(timeout.is_finite() && timeout > 0.0) {
        return Err(PyValueError::new_err("timeout must be a positive number of seconds"));
    }
    Ok(ComputeConfig {
        max_degree,
        limits: Limits {
            max_degree: Some(gb_max_degree),
            timeout: Some(Duration::from_secs_f64(timeout)),
        },
        force,
    })
}

#[pyclass(name = "VarietySpec", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyVarietySpec(symtensor::VarietySpec);

#[pymethods]
impl PyVarietySpec {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        symtensor::VarietySpec::parse(text).map(Self).map_err(to_py)
    }

    #[getter]
    fn dim_x(&self) -> u32 {
        self.0.dim_x()
    }

    #[getter]
    fn kappa(&self) -> String {
        self.0.kappa().to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("VarietySpec('{}')", self.0)
    }
}

#[pyclass(name = "HilbertSeries", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHilbertSeries(symtensor::HilbertSeries);

#[pymethods]
impl PyHilbertSeries {
    /// `numerator(t) / ∏ (1 - t^w)` over the given weights.
    #[new]
    fn new(numerator: Vec<i128>, denominator_weights: Vec<u32>) -> Self {
        Self(symtensor::HilbertSeries::new(numerator, denominator_weights))
    }

    #[getter]
    fn numerator(&self) -> Vec<i128> {
        self.0.numerator().to_vec()
    }

    #[getter]
    fn denominator_weights(&self) -> Vec<u32> {
        self.0.denominator_weights().to_vec()
    }

    #[getter]
    fn krull_dim(&self) -> usize {
        self.0.krull_dim()
    }

    fn expand(&self, max_degree: usize) -> PyResult<Vec<u128>> {
        self.0.expand(max_degree).map(|d| d.0).map_err(to_py)
    }

    /// Equality as rational functions.
    fn equals(&self, other: &PyHilbertSeries) -> bool {
        self.0.series_eq(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HilbertSeries({})", self.0)
    }
}

#[pyclass(name = "CatalogEntry", frozen)]
struct PyCatalogEntry {
    #[pyo3(get)]
    spec: PyVarietySpec,
    #[pyo3(get)]
    coefficients: Vec<u128>,
    #[pyo3(get)]
    rational_form: Option<PyHilbertSeries>,
    #[pyo3(get)]
    krull_dim: Option<usize>,
    #[pyo3(get)]
    provenance: String,
    #[pyo3(get)]
    flags: Vec<String>,
}

#[pymethods]
impl PyCatalogEntry {
    fn __repr__(&self) -> String {
        format!("CatalogEntry('{}', {:?})", self.spec.0, self.coefficients)
    }
}

/// Hilbert function and rational form of `S(X)` for a spec string.
#[pyfunction]
#[pyo3(signature = (spec, max_degree = 8, gb_max_degree = 12, timeout = 300.0, force = false))]
fn series(
    py: Python<'_>,
    spec: &str,
    max_degree: usize,
    gb_max_degree: u32,
    timeout: f64,
    force: bool,
) -> PyResult<PyCatalogEntry> {
    let spec = symtensor::VarietySpec::parse(spec).map_err(to_py)?;
    let cfg = config(max_degree, gb_max_degree, timeout, force)?;
    let entry = py.detach(|| catalog::compute(&spec, &cfg)).map_err(to_py)?;
    Ok(PyCatalogEntry {
        spec: PyVarietySpec(entry.spec),
        coefficients: entry.dims.0,
        rational_form: entry.rational_form.map(PyHilbertSeries),
        krull_dim: entry.krull_dim,
        provenance: entry.provenance,
        flags: entry.flags,
    })
}

/// Generators of the ideal presentation, one polynomial string each.
#[pyfunction]
fn ideal_dump(spec: &str) -> PyResult<Vec<String>> {
    let spec = symtensor::VarietySpec::parse(spec).map_err(to_py)?;
    let ideal = catalog::ideal_for(&spec).map_err(to_py)?;
    Ok(ideal.dump().lines().map(str::to_string).collect())
}

/// Hilbert series of `k[x_1..x_n] / I` for a monomial ideal given by exponent vectors.
#[pyfunction]
fn monomial_ideal_series(nvars: usize, generators: Vec<Vec<u32>>) -> PyResult<PyHilbertSeries> {
    if generators.iter().any(|g| g.len() != nvars) {
        return Err(PyValueError::new_err("exponent vectors must have length nvars"));
    }
    Ok(PyHilbertSeries(hilbert::series_from_monomial_ideal(&MonomialIdeal::new(
        nvars, generators,
    ))))
}

/// Dimensions of degree-d invariants of a Klein group, e.g. `"2I"` or `"BD,3"`.
#[pyfunction]
fn molien_dims(py: Python<'_>, group: &str, max_degree: usize) -> PyResult<Vec<u64>> {
    let label = match symtensor::VarietySpec::parse(&format!("Klein({group})")).map_err(to_py)? {
        symtensor::VarietySpec::RuledKlein(label) => label,
        _ => unreachable!(),
    };
    py.detach(|| invariants::build_group(label).and_then(|g| invariants::invariant_dimensions(&g, max_degree)))
        .map_err(to_py)
}

/// Runs the verification suite; returns `(exit_code, [(id, status, details)])`.
#[pyfunction]
#[pyo3(signature = (max_degree = 8, gb_max_degree = 12, timeout = 300.0))]
fn verify(
    py: Python<'_>,
    max_degree: usize,
    gb_max_degree: u32,
    timeout: f64,
) -> PyResult<(i32, Vec<(String, String, Vec<String>)>)> {
    let cfg = config(max_degree, gb_max_degree, timeout, false)?;
    let report = py.detach(|| symtensor::verify::run_verify(&cfg));
    let checks = report
        .checks
        .iter()
        .map(|c| (c.id.clone(), c.status.label().to_string(), c.details.clone()))
        .collect();
    Ok((report.exit_code(), checks))
}

#[pymodule]
fn symtensor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVarietySpec>()?;
    m.add_class::<PyHilbertSeries>()?;
    m.add_class::<PyCatalogEntry>()?;
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_dump, m)?)?;
    m.add_function(wrap_pyfunction!(monomial_ideal_series, m)?)?;
    m.add_function(wrap_pyfunction!(molien_dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SymtensorError", m.py().get_type::<SymtensorError>())?;
    m.add("LimitExceededError", m.py().get_type::<LimitExceededError>())?;
    Ok(())
}
