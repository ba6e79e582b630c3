//! Python bindings for the gamma-feedback simulator.
//!
//! `lambda` is a Python keyword, so the hedging sensitivity is exposed as
//! `lambda_`. Errors map to `ValueError` (domain or config), `OSError` (I/O),
//! and the module's `SingularDenominatorError` / `NumericalOverflowError`,
//! both subclasses of `ArithmeticError`.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gamma_feedback::analysis::{self, GridField};
use gamma_feedback::dynamics;
use gamma_feedback::io::{self, csv, PlotArtifact, Subcommand};
use gamma_feedback::{model, stochastic, Error};

create_exception!(
    gamma_feedback_py,
    SingularDenominatorError,
    PyArithmeticError
);
create_exception!(gamma_feedback_py, NumericalOverflowError, PyArithmeticError);

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::SingularDenominator { .. } => SingularDenominatorError::new_err(msg),
        Error::NumericalOverflow { .. } => NumericalOverflowError::new_err(msg),
        Error::Io { .. } => PyOSError::new_err(msg),
        Error::Domain { .. } | Error::ConfigParse { .. } | Error::ConfigInvalid { .. } => {
            PyValueError::new_err(msg)
        }
    }
}

trait IntoPyResult<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPyResult<T> for gamma_feedback::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "ModelParams", from_py_object)]
#[derive(Clone)]
struct PyModelParams(gamma_feedback::ModelParams);

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (*, lambda_=None, beta=None, sigma_m=None, n0=None, gamma0=None, mu0=None, k=None, c=None, eta=None, xi=None, s0=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        lambda_: Option<f64>,
        beta: Option<f64>,
        sigma_m: Option<f64>,
        n0: Option<f64>,
        gamma0: Option<f64>,
        mu0: Option<f64>,
        k: Option<f64>,
        c: Option<f64>,
        eta: Option<f64>,
        xi: Option<f64>,
        s0: Option<f64>,
    ) -> PyResult<Self> {
        let d = gamma_feedback::ModelParams::default();
        let p = gamma_feedback::ModelParams {
            lambda: lambda_.unwrap_or(d.lambda),
            beta: beta.unwrap_or(d.beta),
            sigma_m: sigma_m.unwrap_or(d.sigma_m),
            n0: n0.unwrap_or(d.n0),
            gamma0: gamma0.unwrap_or(d.gamma0),
            mu0: mu0.unwrap_or(d.mu0),
            k: k.unwrap_or(d.k),
            c: c.unwrap_or(d.c),
            eta: eta.unwrap_or(d.eta),
            xi: xi.unwrap_or(d.xi),
            s0: s0.unwrap_or(d.s0),
        };
        p.validate().py()?;
        Ok(PyModelParams(p))
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda
    }
    #[setter]
    fn set_lambda_(&mut self, v: f64) {
        self.0.lambda = v;
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }
    #[setter]
    fn set_beta(&mut self, v: f64) {
        self.0.beta = v;
    }
    #[getter]
    fn sigma_m(&self) -> f64 {
        self.0.sigma_m
    }
    #[setter]
    fn set_sigma_m(&mut self, v: f64) {
        self.0.sigma_m = v;
    }
    #[getter]
    fn n0(&self) -> f64 {
        self.0.n0
    }
    #[setter]
    fn set_n0(&mut self, v: f64) {
        self.0.n0 = v;
    }
    #[getter]
    fn gamma0(&self) -> f64 {
        self.0.gamma0
    }
    #[setter]
    fn set_gamma0(&mut self, v: f64) {
        self.0.gamma0 = v;
    }
    #[getter]
    fn mu0(&self) -> f64 {
        self.0.mu0
    }
    #[setter]
    fn set_mu0(&mut self, v: f64) {
        self.0.mu0 = v;
    }
    #[getter]
    fn k(&self) -> f64 {
        self.0.k
    }
    #[setter]
    fn set_k(&mut self, v: f64) {
        self.0.k = v;
    }
    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }
    #[setter]
    fn set_c(&mut self, v: f64) {
        self.0.c = v;
    }
    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta
    }
    #[setter]
    fn set_eta(&mut self, v: f64) {
        self.0.eta = v;
    }
    #[getter]
    fn xi(&self) -> f64 {
        self.0.xi
    }
    #[setter]
    fn set_xi(&mut self, v: f64) {
        self.0.xi = v;
    }
    #[getter]
    fn s0(&self) -> f64 {
        self.0.s0
    }
    #[setter]
    fn set_s0(&mut self, v: f64) {
        self.0.s0 = v;
    }

    /// Total exposure `G = n0 · gamma0`.
    fn exposure(&self) -> f64 {
        self.0.exposure()
    }

    fn validate(&self) -> PyResult<()> {
        self.0.validate().py()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "Impact", from_py_object)]
#[derive(Clone)]
struct PyImpact(model::Impact);

#[pymethods]
impl PyImpact {
    /// Default impact: `tanh` with the default steepness.
    #[new]
    fn new() -> Self {
        PyImpact(model::Impact::default())
    }

    #[staticmethod]
    fn linear() -> Self {
        PyImpact(model::Impact::Linear)
    }

    #[staticmethod]
    fn clamp(i_max: f64) -> PyResult<Self> {
        let i = model::Impact::Clamp { i_max };
        i.validate().py()?;
        Ok(PyImpact(i))
    }

    #[staticmethod]
    fn tanh(c: f64) -> PyResult<Self> {
        let i = model::Impact::Tanh { c };
        i.validate().py()?;
        Ok(PyImpact(i))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.name()
    }

    fn apply(&self, y: f64) -> f64 {
        self.0.apply(y)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn impact_or_default(impact: Option<PyImpact>) -> model::Impact {
    impact.map(|i| i.0).unwrap_or_default()
}

#[pyclass(name = "GridSpec", from_py_object)]
#[derive(Clone)]
struct PyGridSpec(analysis::GridSpec);

#[pymethods]
impl PyGridSpec {
    #[new]
    #[pyo3(signature = (*, beta_min=None, beta_max=None, g_min=None, g_max=None, n_beta=None, n_g=None, shock_ratio=None, lambda_=None, sigma_m=None, k=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        beta_min: Option<f64>,
        beta_max: Option<f64>,
        g_min: Option<f64>,
        g_max: Option<f64>,
        n_beta: Option<usize>,
        n_g: Option<usize>,
        shock_ratio: Option<f64>,
        lambda_: Option<f64>,
        sigma_m: Option<f64>,
        k: Option<f64>,
    ) -> PyResult<Self> {
        let d = analysis::GridSpec::default();
        let s = analysis::GridSpec {
            beta_min: beta_min.unwrap_or(d.beta_min),
            beta_max: beta_max.unwrap_or(d.beta_max),
            g_min: g_min.unwrap_or(d.g_min),
            g_max: g_max.unwrap_or(d.g_max),
            n_beta: n_beta.unwrap_or(d.n_beta),
            n_g: n_g.unwrap_or(d.n_g),
            shock_ratio: shock_ratio.unwrap_or(d.shock_ratio),
            lambda: lambda_.unwrap_or(d.lambda),
            sigma_m: sigma_m.unwrap_or(d.sigma_m),
            k: k.unwrap_or(d.k),
        };
        s.validate().py()?;
        Ok(PyGridSpec(s))
    }

    fn beta_axis(&self) -> Vec<f64> {
        (0..self.0.n_beta).map(|i| self.0.beta_at(i)).collect()
    }

    fn g_axis(&self) -> Vec<f64> {
        (0..self.0.n_g).map(|j| self.0.g_at(j)).collect()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "GridScan")]
struct PyGridScan(analysis::GridScan);

#[pymethods]
impl PyGridScan {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    #[getter]
    fn field(&self) -> &'static str {
        match self.0.field {
            GridField::StabilityDenominator => "stability_denominator",
            GridField::Amplification => "amplification",
        }
    }

    #[getter]
    fn spec(&self) -> PyGridSpec {
        PyGridSpec(self.0.spec)
    }

    /// Cell value, or `None` when the cell is singular.
    fn get(&self, i: usize, j: usize) -> PyResult<Option<f64>> {
        if i >= self.0.rows() || j >= self.0.cols() {
            return Err(PyValueError::new_err(format!(
                "cell ({i}, {j}) out of range"
            )));
        }
        Ok(self.0.get(i, j))
    }

    /// Row-major rows (β along rows); singular cells are `None`.
    fn values(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.0.rows())
            .map(|i| (0..self.0.cols()).map(|j| self.0.get(i, j)).collect())
            .collect()
    }

    fn singular_count(&self) -> usize {
        self.0.singular_count()
    }

    /// Iso-lines at `level` as lists of `(beta, G)` points.
    fn contour(&self, level: f64) -> Vec<Vec<(f64, f64)>> {
        analysis::extract_contour(&self.0, level).polylines
    }

    fn to_csv(&self) -> String {
        csv::grid_csv(&self.0)
    }

    /// Heatmap with the given contour levels overlaid.
    #[pyo3(signature = (levels=vec![0.0], title="".to_string()))]
    fn to_svg(&self, levels: Vec<f64>, title: String) -> PyResult<String> {
        let sets: Vec<(String, analysis::ContourSet)> = levels
            .iter()
            .map(|&l| (format!("level {l}"), analysis::extract_contour(&self.0, l)))
            .collect();
        io::emit_svg(
            &PlotArtifact::Grid {
                scan: &self.0,
                contours: &sets,
            },
            &title,
        )
        .py()
    }
}

#[pyclass(name = "StochasticSpec", from_py_object)]
#[derive(Clone)]
struct PyStochasticSpec(stochastic::StochasticSpec);

#[pymethods]
impl PyStochasticSpec {
    #[new]
    #[pyo3(signature = (*, rho=None, sigma_n=None, kappa=None, seed=None))]
    fn new(
        rho: Option<f64>,
        sigma_n: Option<f64>,
        kappa: Option<f64>,
        seed: Option<u64>,
    ) -> PyResult<Self> {
        let d = stochastic::StochasticSpec::default();
        let s = stochastic::StochasticSpec {
            rho: rho.unwrap_or(d.rho),
            sigma_n: sigma_n.unwrap_or(d.sigma_n),
            kappa: kappa.unwrap_or(d.kappa),
            seed: seed.unwrap_or(d.seed),
        };
        s.validate().py()?;
        Ok(PyStochasticSpec(s))
    }

    fn cap(&self, n0: f64) -> PyResult<f64> {
        self.0.cap(n0).py()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "EventSpec", from_py_object)]
#[derive(Clone)]
struct PyEventSpec(stochastic::EventSpec);

#[pymethods]
impl PyEventSpec {
    #[new]
    #[pyo3(signature = (*, n_spikes=None, max_fraction=None, horizon=None, seed=None))]
    fn new(
        n_spikes: Option<usize>,
        max_fraction: Option<f64>,
        horizon: Option<usize>,
        seed: Option<u64>,
    ) -> PyResult<Self> {
        let d = stochastic::EventSpec::default();
        let s = stochastic::EventSpec {
            n_spikes: n_spikes.unwrap_or(d.n_spikes),
            max_fraction: max_fraction.unwrap_or(d.max_fraction),
            horizon: horizon.unwrap_or(d.horizon),
            seed: seed.unwrap_or(d.seed),
        };
        s.validate().py()?;
        Ok(PyEventSpec(s))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "Trajectory", from_py_object)]
#[derive(Clone)]
struct PyTrajectory(dynamics::Trajectory);

impl PyTrajectory {
    fn column(&self, f: impl Fn(&dynamics::SimState) -> f64) -> Vec<f64> {
        self.0.states.iter().map(f).collect()
    }
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn mode(&self) -> &'static str {
        self.0.mode.as_str()
    }
    #[getter]
    fn seed(&self) -> Option<u64> {
        self.0.seed
    }
    #[getter]
    fn horizon(&self) -> usize {
        self.0.horizon()
    }
    #[getter]
    fn t(&self) -> Vec<usize> {
        self.0.states.iter().map(|s| s.t).collect()
    }
    #[getter]
    fn s(&self) -> Vec<f64> {
        self.column(|s| s.s)
    }
    #[getter]
    fn ds(&self) -> Vec<f64> {
        self.column(|s| s.ds_obs)
    }
    #[getter]
    fn m_cum(&self) -> Vec<f64> {
        self.column(|s| s.m_cum)
    }
    #[getter]
    fn n(&self) -> Vec<f64> {
        self.column(|s| s.n_t)
    }
    #[getter]
    fn mu(&self) -> Vec<f64> {
        self.column(|s| s.mu_t)
    }
    #[getter]
    fn nu(&self) -> Vec<f64> {
        self.column(|s| s.nu_t)
    }

    fn __len__(&self) -> usize {
        self.0.states.len()
    }

    fn to_csv(&self) -> String {
        csv::trajectory_csv(&self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(mode={}, horizon={}, final_s={})",
            self.0.mode.as_str(),
            self.0.horizon(),
            self.0.last().s
        )
    }
}

#[pyfunction]
fn relative_surprise(delta_s: f64, s: f64, beta: f64, sigma_m: f64) -> PyResult<f64> {
    model::relative_surprise(delta_s, s, beta, sigma_m).py()
}

#[pyfunction]
fn phi(x: f64, k: f64) -> PyResult<f64> {
    model::phi(x, k).py()
}

#[pyfunction]
fn stability_denominator(params: &PyModelParams, shock_ratio: f64) -> PyResult<f64> {
    model::stability_denominator(&params.0, shock_ratio).py()
}

#[pyfunction]
fn static_response(params: &PyModelParams, shock_ratio: f64, s: f64) -> PyResult<f64> {
    model::static_response(&params.0, shock_ratio, s).py()
}

#[pyfunction]
fn bifurcation_surface(
    lambda_: f64,
    beta: f64,
    shock_ratio: f64,
    sigma_m: f64,
    k: f64,
) -> PyResult<f64> {
    analysis::bifurcation_surface(lambda_, beta, shock_ratio, sigma_m, k).py()
}

#[pyfunction]
#[pyo3(signature = (params, impact=None))]
fn linearized_feedback(params: &PyModelParams, impact: Option<PyImpact>) -> f64 {
    analysis::linearized_feedback(&params.0, &impact_or_default(impact))
}

/// Fixed point of `ds -> a + f*ds` as a dict with `fixed_point` (None if singular)
/// and `classification`.
#[pyfunction]
fn analyze_fixed_point<'py>(py: Python<'py>, a: f64, f: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = analysis::analyze_fixed_point(a, f);
    let d = PyDict::new(py);
    d.set_item("a", r.a)?;
    d.set_item("f", r.f)?;
    d.set_item("fixed_point", r.fixed_point)?;
    d.set_item("classification", r.classification.as_str())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (spec=None))]
fn stability_grid(spec: Option<PyGridSpec>) -> PyResult<PyGridScan> {
    let spec = spec.map(|s| s.0).unwrap_or_default();
    analysis::stability_grid(&spec).py().map(PyGridScan)
}

#[pyfunction]
#[pyo3(signature = (spec=None))]
fn amplification_grid(spec: Option<PyGridSpec>) -> PyResult<PyGridScan> {
    let spec = spec.map(|s| s.0).unwrap_or_default();
    analysis::amplification_grid(&spec).py().map(PyGridScan)
}

#[pyfunction]
#[pyo3(signature = (spec=None))]
fn bifurcation_curve(spec: Option<PyGridSpec>) -> PyResult<Vec<(f64, f64)>> {
    let spec = spec.map(|s| s.0).unwrap_or_default();
    analysis::bifurcation_curve(&spec).py()
}

#[pyfunction]
#[pyo3(signature = (params, impact=None, horizon=500))]
fn simulate_recursive(
    py: Python<'_>,
    params: PyModelParams,
    impact: Option<PyImpact>,
    horizon: usize,
) -> PyResult<PyTrajectory> {
    let impact = impact_or_default(impact);
    py.detach(|| dynamics::simulate_recursive(&params.0, &impact, horizon))
        .py()
        .map(PyTrajectory)
}

#[pyfunction]
#[pyo3(signature = (params, impact=None, horizon=500))]
fn simulate_one_shot(
    params: &PyModelParams,
    impact: Option<PyImpact>,
    horizon: usize,
) -> PyResult<PyTrajectory> {
    dynamics::simulate_one_shot(&params.0, &impact_or_default(impact), horizon)
        .py()
        .map(PyTrajectory)
}

#[pyfunction]
#[pyo3(signature = (params, impact=None, stoch=None, horizon=500))]
fn simulate_stochastic(
    py: Python<'_>,
    params: PyModelParams,
    impact: Option<PyImpact>,
    stoch: Option<PyStochasticSpec>,
    horizon: usize,
) -> PyResult<PyTrajectory> {
    let impact = impact_or_default(impact);
    let stoch = stoch.map(|s| s.0).unwrap_or_default();
    py.detach(|| stochastic::simulate_stochastic(&params.0, &impact, &stoch, horizon))
        .py()
        .map(PyTrajectory)
}

/// Spike schedule as `{t: magnitude}`.
#[pyfunction]
#[pyo3(signature = (spec=None, n0=200.0))]
fn generate_event_spikes(
    spec: Option<PyEventSpec>,
    n0: f64,
) -> PyResult<std::collections::BTreeMap<usize, f64>> {
    stochastic::generate_event_spikes(&spec.map(|s| s.0).unwrap_or_default(), n0).py()
}

#[pyfunction]
#[pyo3(signature = (params, impact=None, events=None))]
fn simulate_event_driven(
    params: &PyModelParams,
    impact: Option<PyImpact>,
    events: Option<PyEventSpec>,
) -> PyResult<PyTrajectory> {
    let events = events.map(|e| e.0).unwrap_or_default();
    stochastic::simulate_event_driven(&params.0, &impact_or_default(impact), &events)
        .py()
        .map(PyTrajectory)
}

#[pyfunction]
fn exposure_cap(n0: f64, sigma_n: f64, rho: f64, kappa: f64) -> PyResult<f64> {
    stochastic::exposure_cap(n0, sigma_n, rho, kappa).py()
}

/// Multi-line price chart; legend follows the order of `series`.
#[pyfunction]
#[pyo3(signature = (series, title="".to_string()))]
fn trajectories_svg(series: Vec<(String, PyTrajectory)>, title: String) -> PyResult<String> {
    let series: Vec<(String, dynamics::Trajectory)> =
        series.into_iter().map(|(l, t)| (l, t.0)).collect();
    io::emit_svg(&PlotArtifact::Trajectories(&series), &title).py()
}

/// Parses and validates a config document; returns the resolved text.
#[pyfunction]
fn parse_config(text: &str) -> PyResult<String> {
    io::parse_config(text).py().map(|c| c.render())
}

/// Runs a CLI subcommand in-process and returns the manifest as a dict.
#[pyfunction]
#[pyo3(signature = (subcommand, out_dir, config_text="", seed=None))]
fn run_subcommand<'py>(
    py: Python<'py>,
    subcommand: &str,
    out_dir: PathBuf,
    config_text: &str,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let sub: Subcommand = subcommand.parse().py()?;
    let mut cfg = io::parse_config(config_text).py()?.resolved_for(sub);
    if let Some(seed) = seed {
        cfg = cfg.with_seed(seed);
    }
    let manifest = py.detach(|| io::run_subcommand(sub, &cfg, &out_dir)).py()?;
    py.import("json")?
        .call_method1("loads", (manifest.to_json(),))
}

#[pymodule]
fn gamma_feedback_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add(
        "SingularDenominatorError",
        m.py().get_type::<SingularDenominatorError>(),
    )?;
    m.add(
        "NumericalOverflowError",
        m.py().get_type::<NumericalOverflowError>(),
    )?;
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyImpact>()?;
    m.add_class::<PyGridSpec>()?;
    m.add_class::<PyGridScan>()?;
    m.add_class::<PyStochasticSpec>()?;
    m.add_class::<PyEventSpec>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(relative_surprise, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(stability_denominator, m)?)?;
    m.add_function(wrap_pyfunction!(static_response, m)?)?;
    m.add_function(wrap_pyfunction!(bifurcation_surface, m)?)?;
    m.add_function(wrap_pyfunction!(linearized_feedback, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(stability_grid, m)?)?;
    m.add_function(wrap_pyfunction!(amplification_grid, m)?)?;
    m.add_function(wrap_pyfunction!(bifurcation_curve, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_recursive, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_one_shot, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_stochastic, m)?)?;
    m.add_function(wrap_pyfunction!(generate_event_spikes, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_event_driven, m)?)?;
    m.add_function(wrap_pyfunction!(exposure_cap, m)?)?;
    m.add_function(wrap_pyfunction!(trajectories_svg, m)?)?;
    m.add_function(wrap_pyfunction!(parse_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_subcommand, m)?)?;
    Ok(())
}
