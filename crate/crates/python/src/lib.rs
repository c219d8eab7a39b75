//! Python bindings for `extremal-core`.
//!
//! Moduli may be passed as `Modulus`, a Python `complex` or an `"a+bi"`
//! string; curves as `CurveClass` or a `(p, q)` tuple.

use extremal_core::beltrami::{self, BeltramiField, CATALOG};
use extremal_core::harmonic::{self, HarmonicMapTorus};
use extremal_core::moduli::{self, CurveClass, MappingClass, Modulus};
use extremal_core::variation::{self, IdentityReport, VariationField};
use extremal_core::verify::{self, ToleranceProfile};
use extremal_core::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Modulus", frozen, skip_from_py_object, eq)]
#[derive(Clone, Copy, PartialEq)]
pub struct PyModulus(Modulus);

#[pymethods]
impl PyModulus {
    #[new]
    fn new(re: f64, im: f64) -> PyResult<Self> {
        Modulus::new(re, im).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn re(&self) -> f64 {
        self.0.re()
    }

    #[getter]
    fn im(&self) -> f64 {
        self.0.im()
    }

    fn __complex__(&self) -> Complex64 {
        self.0.as_complex()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Modulus('{}')", self.0)
    }
}

#[pyclass(name = "CurveClass", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, Copy, PartialEq, Hash)]
pub struct PyCurveClass(CurveClass);

#[pymethods]
impl PyCurveClass {
    #[new]
    fn new(p: i64, q: i64) -> PyResult<Self> {
        CurveClass::new(p, q).map(Self).map_err(err)
    }

    #[getter]
    fn p(&self) -> i64 {
        self.0.p()
    }

    #[getter]
    fn q(&self) -> i64 {
        self.0.q()
    }

    /// The vector `p + q tau`.
    fn vector(&self, tau: &Bound<'_, PyAny>) -> PyResult<Complex64> {
        Ok(self.0.vector(to_tau(tau)?))
    }

    fn canonical(&self) -> Self {
        Self(self.0.canonical())
    }

    fn __repr__(&self) -> String {
        format!("CurveClass({}, {})", self.0.p(), self.0.q())
    }
}

fn to_tau(obj: &Bound<'_, PyAny>) -> PyResult<Modulus> {
    if let Ok(m) = obj.extract::<PyRef<'_, PyModulus>>() {
        return Ok(m.0);
    }
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(err);
    }
    if let Ok(z) = obj.extract::<Complex64>() {
        return Modulus::from_complex(z).map_err(err);
    }
    Err(PyTypeError::new_err("tau must be a Modulus, complex or 'a+bi' string"))
}

fn to_curve(obj: &Bound<'_, PyAny>) -> PyResult<CurveClass> {
    if let Ok(c) = obj.extract::<PyRef<'_, PyCurveClass>>() {
        return Ok(c.0);
    }
    if let Ok((p, q)) = obj.extract::<(i64, i64)>() {
        return CurveClass::new(p, q).map_err(err);
    }
    Err(PyTypeError::new_err("curve must be a CurveClass or a (p, q) tuple"))
}

#[pyclass(name = "HarmonicMap", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyHarmonicMap(HarmonicMapTorus);

#[pymethods]
impl PyHarmonicMap {
    #[getter]
    fn coeff(&self) -> Complex64 {
        self.0.coeff
    }

    #[getter]
    fn periods(&self) -> (f64, f64) {
        (self.0.periods[0], self.0.periods[1])
    }

    fn __call__(&self, z: Complex64) -> f64 {
        self.0.eval(z)
    }

    fn energy(&self) -> f64 {
        harmonic::energy(&self.0)
    }

    /// Coefficient of `dz^2` in the Hopf differential.
    fn hopf(&self) -> Complex64 {
        harmonic::hopf(&self.0).coeff
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("maps serialize")
    }
}

#[pyclass(name = "BeltramiField", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyBeltramiField(BeltramiField);

#[pymethods]
impl PyBeltramiField {
    #[staticmethod]
    fn constant(tau: &Bound<'_, PyAny>, m: Complex64) -> PyResult<Self> {
        BeltramiField::constant(to_tau(tau)?, m).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (tau, name, n, scale = Complex64::new(1.0, 0.0)))]
    fn catalog(tau: &Bound<'_, PyAny>, name: &str, n: usize, scale: Complex64) -> PyResult<Self> {
        BeltramiField::from_catalog(to_tau(tau)?, name, n, scale).map(Self).map_err(err)
    }

    /// Row-major samples: index `k * n + j` is the value at `(j/n, k/n)`.
    #[staticmethod]
    fn from_samples(tau: &Bound<'_, PyAny>, n: usize, samples: Vec<Complex64>) -> PyResult<Self> {
        BeltramiField::from_samples(to_tau(tau)?, n, samples).map(Self).map_err(err)
    }

    #[getter]
    fn grid_size(&self) -> Option<usize> {
        self.0.grid_size()
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn is_harmonic(&self) -> bool {
        self.0.is_harmonic()
    }

    fn mean(&self) -> Complex64 {
        self.0.mean()
    }

    fn samples(&self, n: usize) -> PyResult<Vec<Complex64>> {
        self.0.samples_on(n).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("fields serialize")
    }
}

#[pyclass(name = "VariationField", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyVariationField(VariationField);

#[pymethods]
impl PyVariationField {
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn affine(&self) -> (Complex64, Complex64) {
        self.0.affine
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    fn value(&self, j: usize, k: usize) -> f64 {
        self.0.value(j, k)
    }

    /// All grid values, row-major.
    fn values(&self) -> Vec<f64> {
        let n = self.0.n;
        (0..n * n).map(|i| self.0.value(i % n, i / n)).collect()
    }
}

fn report_dict<'py>(py: Python<'py>, r: &IdentityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &r.name)?;
    d.set_item("lhs", r.lhs)?;
    d.set_item("rhs", r.rhs)?;
    d.set_item("abs_err", r.abs_err)?;
    d.set_item("rel_err", r.rel_err)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("pass", r.pass)?;
    d.set_item("asserted", r.asserted)?;
    Ok(d)
}

#[pyfunction]
fn extremal_length(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(moduli::extremal_length(to_tau(tau)?, to_curve(curve)?))
}

#[pyfunction]
fn cylinder_modulus(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(moduli::cylinder_modulus(to_tau(tau)?, to_curve(curve)?))
}

#[pyfunction]
fn levi_form(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(moduli::levi_form(to_tau(tau)?, to_curve(curve)?))
}

#[pyfunction]
fn hyperbolic_distance(tau1: &Bound<'_, PyAny>, tau2: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(moduli::hyperbolic_distance(to_tau(tau1)?, to_tau(tau2)?))
}

/// Returns `(distance, (p, q), ratio)`.
#[pyfunction]
#[pyo3(signature = (tau1, tau2, max_index = 50))]
fn kerckhoff_distance(
    tau1: &Bound<'_, PyAny>,
    tau2: &Bound<'_, PyAny>,
    max_index: u32,
) -> PyResult<(f64, (i64, i64), f64)> {
    let k = moduli::kerckhoff_distance(to_tau(tau1)?, to_tau(tau2)?, max_index).map_err(err)?;
    Ok((k.distance, (k.maximizer.p(), k.maximizer.q()), k.ratio))
}

/// Returns `(tau, curve)` after the change of marking `[[a, b], [c, d]]`.
#[pyfunction]
fn apply_mapping_class(
    tau: &Bound<'_, PyAny>,
    curve: &Bound<'_, PyAny>,
    matrix: [i64; 4],
) -> PyResult<(PyModulus, PyCurveClass)> {
    let g = MappingClass::new(matrix[0], matrix[1], matrix[2], matrix[3]).map_err(err)?;
    let (t, c) = moduli::apply_mapping_class(to_tau(tau)?, to_curve(curve)?, g);
    Ok((PyModulus(t), PyCurveClass(c)))
}

#[pyfunction]
fn build_harmonic_map(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>) -> PyResult<PyHarmonicMap> {
    Ok(PyHarmonicMap(harmonic::build_harmonic_map(to_tau(tau)?, to_curve(curve)?)))
}

#[pyfunction]
fn modulus_path_constant(tau: &Bound<'_, PyAny>, m: Complex64, t: f64) -> PyResult<PyModulus> {
    beltrami::modulus_path_constant(to_tau(tau)?, m, t).map(PyModulus).map_err(err)
}

#[pyfunction]
fn teich_geodesic_constant(tau: &Bound<'_, PyAny>, m: Complex64, t: f64) -> PyResult<PyModulus> {
    beltrami::teich_geodesic_constant(to_tau(tau)?, m, t).map(PyModulus).map_err(err)
}

#[pyfunction]
fn first_variation(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>, field: &PyBeltramiField) -> PyResult<f64> {
    variation::first_variation(to_tau(tau)?, to_curve(curve)?, &field.0).map_err(err)
}

#[pyfunction]
fn second_variation(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>, field: &PyBeltramiField) -> PyResult<f64> {
    variation::second_variation(to_tau(tau)?, to_curve(curve)?, &field.0).map_err(err)
}

#[pyfunction]
fn pair_sum_levi(tau: &Bound<'_, PyAny>, curve: &Bound<'_, PyAny>, m: Complex64) -> PyResult<f64> {
    variation::pair_sum_levi(to_tau(tau)?, to_curve(curve)?, m).map_err(err)
}

#[pyfunction]
fn solve_variation_field(
    tau: &Bound<'_, PyAny>,
    curve: &Bound<'_, PyAny>,
    field: &PyBeltramiField,
    n: usize,
) -> PyResult<PyVariationField> {
    variation::solve_variation_field(to_tau(tau)?, to_curve(curve)?, &field.0, n)
        .map(PyVariationField)
        .map_err(err)
}

#[pyfunction]
fn identity_eq11_check<'py>(
    py: Python<'py>,
    tau: &Bound<'py, PyAny>,
    curve: &Bound<'py, PyAny>,
    field: &PyBeltramiField,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let r = variation::identity_eq11_check(to_tau(tau)?, to_curve(curve)?, &field.0, n).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
fn identity_eq15_evaluate<'py>(
    py: Python<'py>,
    tau: &Bound<'py, PyAny>,
    curve: &Bound<'py, PyAny>,
    field: &PyBeltramiField,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let r = variation::identity_eq15_evaluate(to_tau(tau)?, to_curve(curve)?, &field.0, n).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (tau, curve, m, h = 1e-3))]
fn teich_bound_check<'py>(
    py: Python<'py>,
    tau: &Bound<'py, PyAny>,
    curve: &Bound<'py, PyAny>,
    m: Complex64,
    h: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = variation::teich_bound_check(to_tau(tau)?, to_curve(curve)?, m, h).map_err(err)?;
    report_dict(py, &r)
}

/// Runs the verification suite. `tolerances` overrides profile fields by
/// name. Returns `(all_passed, reports)`.
#[pyfunction]
#[pyo3(signature = (seed = 42, tolerances = None))]
fn run_suite<'py>(
    py: Python<'py>,
    seed: u64,
    tolerances: Option<std::collections::HashMap<String, f64>>,
) -> PyResult<(bool, Vec<Bound<'py, PyDict>>)> {
    let mut profile = ToleranceProfile::default();
    for (k, v) in tolerances.unwrap_or_default() {
        profile.set(&k, v).map_err(err)?;
    }
    let result = py.detach(|| verify::run_suite(&profile, seed)).map_err(err)?;
    let reports = result.reports.iter().map(|r| report_dict(py, r)).collect::<PyResult<_>>()?;
    Ok((result.all_passed, reports))
}

#[pymodule]
fn extremal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModulus>()?;
    m.add_class::<PyCurveClass>()?;
    m.add_class::<PyHarmonicMap>()?;
    m.add_class::<PyBeltramiField>()?;
    m.add_class::<PyVariationField>()?;
    m.add("CATALOG", CATALOG.to_vec())?;
    m.add("MEASURE_SCALE", harmonic::MEASURE_SCALE)?;
    m.add_function(wrap_pyfunction!(extremal_length, m)?)?;
    m.add_function(wrap_pyfunction!(cylinder_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(levi_form, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(kerckhoff_distance, m)?)?;
    m.add_function(wrap_pyfunction!(apply_mapping_class, m)?)?;
    m.add_function(wrap_pyfunction!(build_harmonic_map, m)?)?;
    m.add_function(wrap_pyfunction!(modulus_path_constant, m)?)?;
    m.add_function(wrap_pyfunction!(teich_geodesic_constant, m)?)?;
    m.add_function(wrap_pyfunction!(first_variation, m)?)?;
    m.add_function(wrap_pyfunction!(second_variation, m)?)?;
    m.add_function(wrap_pyfunction!(pair_sum_levi, m)?)?;
    m.add_function(wrap_pyfunction!(solve_variation_field, m)?)?;
    m.add_function(wrap_pyfunction!(identity_eq11_check, m)?)?;
    m.add_function(wrap_pyfunction!(identity_eq15_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(teich_bound_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
