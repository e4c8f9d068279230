//! Python bindings for `alphamod-core`.

use std::f64::consts::PI;

use alphamod_core::covering;
use alphamod_core::operators;
use alphamod_core::report::{self, Envelope, Format, Report, VerifySummary};
use alphamod_core::spaces::{self, NormParams};
use alphamod_core::synth::{self, Synthesized, TestFamily};
use alphamod_core::verify::{self, Suite, VerifyConfig};
use alphamod_core::Domain;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: alphamod_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn exponent(s: &str) -> PyResult<alphamod_core::Exponent> {
    s.parse().map_err(err)
}

#[pyclass(name = "GridSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyGridSpec(alphamod_core::GridSpec);

#[pymethods]
impl PyGridSpec {
    #[new]
    #[pyo3(signature = (dim = 1, points_per_axis = 128, period = 8.0 * PI))]
    fn new(dim: usize, points_per_axis: usize, period: f64) -> PyResult<Self> {
        alphamod_core::GridSpec::new(dim, points_per_axis, period).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn points_per_axis(&self) -> usize {
        self.0.points_per_axis()
    }

    #[getter]
    fn period(&self) -> f64 {
        self.0.period()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.0.spacing()
    }

    #[getter]
    fn freq_step(&self) -> f64 {
        self.0.freq_step()
    }

    #[getter]
    fn band_limit(&self) -> f64 {
        self.0.band_limit()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn dual(&self) -> Self {
        Self(self.0.dual())
    }

    /// Sample coordinates in flat storage order.
    fn space_points(&self) -> Vec<Vec<f64>> {
        let dim = self.0.dim();
        self.0.space_points().iter().map(|p| p[..dim].to_vec()).collect()
    }

    fn freq_points(&self) -> Vec<Vec<f64>> {
        let dim = self.0.dim();
        self.0.freq_points().iter().map(|p| p[..dim].to_vec()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "GridSpec(dim={}, points_per_axis={}, period={})",
            self.0.dim(),
            self.0.points_per_axis(),
            self.0.period()
        )
    }
}

#[pyclass(name = "SampledFunction", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunction(alphamod_core::SampledFunction);

#[pymethods]
impl PyFunction {
    /// Samples in flat storage order; `domain` is "space" or "frequency".
    #[new]
    #[pyo3(signature = (grid, values, domain = "space"))]
    fn new(grid: &PyGridSpec, values: Vec<Complex64>, domain: &str) -> PyResult<Self> {
        let domain = match domain {
            "space" => Domain::Space,
            "frequency" => Domain::Frequency,
            other => return Err(PyValueError::new_err(format!("unknown domain {other}"))),
        };
        alphamod_core::SampledFunction::new(grid.0.clone(), domain, values)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn grid(&self) -> PyGridSpec {
        PyGridSpec(self.0.grid().clone())
    }

    #[getter]
    fn domain(&self) -> &'static str {
        self.0.domain().name()
    }

    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    fn forward_ft(&self) -> PyResult<Self> {
        self.0.forward_ft().map(Self).map_err(err)
    }

    fn inverse_ft(&self) -> PyResult<Self> {
        self.0.inverse_ft().map(Self).map_err(err)
    }

    /// Discrete Lebesgue norm for `p` in "1", "2", "inf".
    fn lp_norm(&self, p: &str) -> PyResult<f64> {
        Ok(self.0.lp_norm(exponent(p)?))
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn max_abs_diff(&self, other: &PyFunction) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn to_json(&self) -> PyResult<String> {
        Envelope::from_function(&self.0).to_json().map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Envelope::from_json(text)
            .and_then(Envelope::into_function)
            .map(Self)
            .map_err(err)
    }
}

#[pyclass(name = "SampledSymbol", frozen, from_py_object)]
#[derive(Clone)]
struct PySymbol(alphamod_core::SampledSymbol);

#[pymethods]
impl PySymbol {
    #[staticmethod]
    fn constant(grid: &PyGridSpec, value: Complex64) -> Self {
        Self(alphamod_core::SampledSymbol::constant(&grid.0, value))
    }

    #[getter]
    fn grid(&self) -> PyGridSpec {
        PyGridSpec(self.0.grid().clone())
    }

    #[getter]
    fn domain(&self) -> &'static str {
        self.0.domain().name()
    }

    /// Samples with the space index outer and the frequency index inner.
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.scaled(c))
    }

    fn to_json(&self) -> PyResult<String> {
        Envelope::from_symbol(&self.0).to_json().map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Envelope::from_json(text)
            .and_then(Envelope::into_symbol)
            .map(Self)
            .map_err(err)
    }
}

#[pyclass(name = "LipschitzFunction", frozen, from_py_object)]
#[derive(Clone)]
struct PyLipschitz(operators::LipschitzFunction);

#[pymethods]
impl PyLipschitz {
    #[new]
    fn new(grid: &PyGridSpec, samples: Vec<f64>) -> PyResult<Self> {
        operators::LipschitzFunction::new(&grid.0, samples).map(Self).map_err(err)
    }

    fn samples(&self) -> Vec<f64> {
        self.0.samples().to_vec()
    }

    #[getter]
    fn grad_sup(&self) -> f64 {
        self.0.grad_sup()
    }

    #[getter]
    fn lipschitz_constant(&self) -> f64 {
        self.0.lipschitz_constant()
    }

    fn to_function(&self) -> PyFunction {
        PyFunction(self.0.to_function())
    }
}

#[pyclass(name = "Covering", frozen)]
struct PyCovering(covering::Covering);

#[pymethods]
impl PyCovering {
    #[new]
    fn new(alpha: f64, grid: &PyGridSpec) -> PyResult<Self> {
        covering::Covering::build(alpha, &grid.0).map(Self).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn grid(&self) -> PyGridSpec {
        PyGridSpec(self.0.grid().clone())
    }

    fn __len__(&self) -> usize {
        self.0.pieces().len()
    }

    fn partition_residual(&self) -> f64 {
        self.0.partition_residual()
    }

    /// Admissibility diagnostics as a dict.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = self.0.validate();
        loads(py, &report::render(&Report::Admissibility(&r), Format::Json).map_err(err)?)
    }

    /// Pieces with their sampled windows as a dict.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        loads(py, &report::covering_json(&self.0).map_err(err)?)
    }
}

/// Builds a test object from a JSON family description such as
/// `{"family": "gaussian", "width": 1.5}`.
#[pyfunction]
#[pyo3(signature = (family, grid, seed = 0))]
fn synthesize(py: Python<'_>, family: &str, grid: &PyGridSpec, seed: u64) -> PyResult<Py<PyAny>> {
    let family: TestFamily =
        serde_json::from_str(family).map_err(|e| PyValueError::new_err(format!("family: {e}")))?;
    Ok(match synth::synthesize(&family, &grid.0, seed).map_err(err)? {
        Synthesized::Function(f) => Py::new(py, PyFunction(f))?.into_any(),
        Synthesized::Symbol(s) => Py::new(py, PySymbol(s))?.into_any(),
        Synthesized::Lipschitz(a) => Py::new(py, PyLipschitz(a))?.into_any(),
    })
}

#[pyfunction]
#[pyo3(signature = (f, covering, p = "2", q = "2", s = 0.0, strict_band = true))]
fn alpha_modulation_norm<'py>(
    py: Python<'py>,
    f: &PyFunction,
    covering: &PyCovering,
    p: &str,
    q: &str,
    s: f64,
    strict_band: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let params =
        NormParams::function(covering.0.alpha(), exponent(p)?, exponent(q)?, s).with_strict_band(strict_band);
    let b = spaces::alpha_modulation_norm(&f.0, &params, &covering.0).map_err(err)?;
    loads(py, &report::render(&Report::Norm(&b), Format::Json).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (sigma, covering, s1 = 0.0, s2 = 0.0, strict_band = true))]
fn product_symbol_norm<'py>(
    py: Python<'py>,
    sigma: &PySymbol,
    covering: &PyCovering,
    s1: f64,
    s2: f64,
    strict_band: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let params = NormParams::symbol(covering.0.alpha(), s1, s2).with_strict_band(strict_band);
    let b = spaces::product_symbol_norm(&sigma.0, &params, &covering.0).map_err(err)?;
    loads(py, &report::render(&Report::Norm(&b), Format::Json).map_err(err)?)
}

#[pyfunction]
fn apply(sigma: &PySymbol, f: &PyFunction) -> PyResult<PyFunction> {
    operators::quantize_apply(&sigma.0, &f.0).map(PyFunction).map_err(err)
}

#[pyfunction]
fn adjoint_apply(sigma: &PySymbol, g: &PyFunction) -> PyResult<PyFunction> {
    operators::adjoint_apply(&sigma.0, &g.0).map(PyFunction).map_err(err)
}

/// `[a, sigma(X, D)] f`.
#[pyfunction]
fn commutator(sigma: &PySymbol, a: &PyLipschitz, f: &PyFunction) -> PyResult<PyFunction> {
    operators::commutator_apply(&sigma.0, &a.0, &f.0).map(PyFunction).map_err(err)
}

/// Returns `(norm, iterations, converged)`.
#[pyfunction]
#[pyo3(signature = (sigma, tol = 1e-10, max_iter = 500))]
fn norm_estimate(sigma: &PySymbol, tol: f64, max_iter: usize) -> PyResult<(f64, usize, bool)> {
    let e = operators::operator_norm_estimate(&sigma.0, tol, max_iter).map_err(err)?;
    Ok((e.norm, e.iterations, e.converged))
}

/// Runs a verification suite and returns the summary as a dict.
#[pyfunction]
#[pyo3(signature = (suite, alphas = None, points_per_axis = None, trials = None, seed = None, refine = true))]
fn run_verify<'py>(
    py: Python<'py>,
    suite: &str,
    alphas: Option<Vec<f64>>,
    points_per_axis: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    refine: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let kind = match suite {
        "thm11" => Suite::Operator,
        "thm12" => Suite::Commutator,
        "lemmas" => Suite::Lemmas,
        "appendix" => Suite::Appendix,
        "all" => Suite::All,
        other => return Err(PyValueError::new_err(format!("unknown suite {other}"))),
    };
    let mut cfg = VerifyConfig { refine, ..VerifyConfig::default() };
    if let Some(n) = points_per_axis {
        cfg.points_per_axis = n;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let alphas = alphas.unwrap_or_else(|| vec![0.0, 0.5, 1.0]);
    let reports = py
        .detach(|| verify::run_suite(kind, &alphas, &cfg))
        .map_err(err)?;
    let summary = VerifySummary::new(suite, &alphas, &cfg, &reports);
    loads(py, &report::render(&Report::Summary(&summary), Format::Json).map_err(err)?)
}

#[pymodule]
fn alphamod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGridSpec>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PySymbol>()?;
    m.add_class::<PyLipschitz>()?;
    m.add_class::<PyCovering>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_modulation_norm, m)?)?;
    m.add_function(wrap_pyfunction!(product_symbol_norm, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(adjoint_apply, m)?)?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(norm_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
