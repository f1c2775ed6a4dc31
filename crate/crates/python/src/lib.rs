//! Python bindings for the `spectral-bounds` crate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spectral_bounds::barrier;
use spectral_bounds::bounds::{self, GeometryData};
use spectral_bounds::config::RunConfig;
use spectral_bounds::model::{Hypotheses, ModelManifold};
use spectral_bounds::solver::{self, Method, RadialEigenSolution, SolverConfig};
use spectral_bounds::sweep::{self, SweepConfig};
use spectral_bounds::verify::{self, VerifyConfig};
use spectral_bounds::xi_suite::{self, XiSuiteConfig};
use spectral_bounds::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for spectral_bounds::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(name = "reilly_bound")]
fn py_reilly_bound(n: u32, k: f64) -> PyResult<f64> {
    bounds::reilly_bound(n, k).py()
}

#[pyfunction]
#[pyo3(name = "zhong_yang_bound")]
fn py_zhong_yang_bound(d: f64) -> PyResult<f64> {
    bounds::zhong_yang_bound(d).py()
}

#[pyfunction]
#[pyo3(name = "yang_bound")]
fn py_yang_bound(n: u32, k: f64, dtilde: f64) -> PyResult<f64> {
    bounds::yang_bound(n, k, dtilde).py()
}

#[pyfunction]
#[pyo3(name = "improved_bound")]
fn py_improved_bound(n: u32, k: f64, dtilde: f64) -> PyResult<f64> {
    bounds::improved_bound(n, k, dtilde).py()
}

/// Every applicable bound as `(name, value)` pairs.
#[pyfunction]
#[pyo3(name = "applicable_bounds", signature = (n, k, d=None, dtilde=None))]
fn py_applicable_bounds(
    n: u32,
    k: f64,
    d: Option<f64>,
    dtilde: Option<f64>,
) -> PyResult<Vec<(&'static str, f64)>> {
    let g = GeometryData::new(n, k, d, dtilde).py()?;
    Ok(bounds::applicable_bounds(&g)
        .py()?
        .into_iter()
        .map(|b| (b.kind.name(), b.value))
        .collect())
}

#[pyfunction]
#[pyo3(name = "best_bound", signature = (n, k, d=None, dtilde=None))]
fn py_best_bound(n: u32, k: f64, d: Option<f64>, dtilde: Option<f64>) -> PyResult<(&'static str, f64)> {
    let g = GeometryData::new(n, k, d, dtilde).py()?;
    let b = bounds::best_bound(&g).py()?;
    Ok((b.kind.name(), b.value))
}

/// `(delta, exceeds_lichnerowicz_range)`.
#[pyfunction]
#[pyo3(name = "delta_of")]
fn py_delta_of(lambda: f64, n: u32, k: f64) -> PyResult<(f64, bool)> {
    let d = bounds::delta_of(lambda, n, k).py()?;
    Ok((d.value, d.exceeds_lichnerowicz_range))
}

#[pyfunction]
#[pyo3(name = "xi")]
fn py_xi(t: f64) -> PyResult<f64> {
    barrier::xi(t).py()
}

/// `(xi, xi', xi'', xi''')` at `t`.
#[pyfunction]
#[pyo3(name = "xi_derivatives")]
fn py_xi_derivatives(t: f64) -> PyResult<(f64, f64, f64, f64)> {
    let e = barrier::xi_derivatives(t).py()?;
    Ok((e.value, e.d1, e.d2, e.d3))
}

/// `(z, z', z'')` for `z = 1 + delta xi`.
#[pyfunction]
#[pyo3(name = "z_eval")]
fn py_z_eval(t: f64, delta: f64) -> PyResult<(f64, f64, f64)> {
    let z = barrier::z_eval(t, delta).py()?;
    Ok((z.z, z.z1, z.z2))
}

#[pyfunction]
#[pyo3(name = "xi_integral")]
fn py_xi_integral(a: f64, b: f64) -> PyResult<f64> {
    barrier::xi_integral(a, b).py()
}

#[pyfunction]
#[pyo3(name = "barrier_inequality_rhs")]
fn py_barrier_inequality_rhs(t0: f64, z: f64, z1: f64, z2: f64, delta: f64) -> PyResult<f64> {
    barrier::barrier_inequality_rhs(t0, z, z1, z2, delta).py()
}

#[pyclass(name = "XiReport", module = "spectral_bounds_py", frozen)]
struct PyXiReport(xi_suite::XiReport);

#[pymethods]
impl PyXiReport {
    #[getter]
    fn all_pass(&self) -> bool {
        self.0.all_pass()
    }

    /// `(id, max_residual, threshold, pass)` for each property.
    fn outcomes(&self) -> Vec<(&'static str, f64, f64, bool)> {
        self.0
            .outcomes
            .iter()
            .map(|o| (o.id, o.max_residual, o.threshold, o.pass))
            .collect()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_report(&self) -> String {
        self.0.to_report()
    }
}

#[pyfunction]
#[pyo3(name = "xi_property_suite", signature = (grid=10_001, tol=1e-9))]
fn py_xi_property_suite(grid: usize, tol: f64) -> PyResult<PyXiReport> {
    let cfg = XiSuiteConfig {
        grid_size: grid,
        residual_tol: tol,
        ..XiSuiteConfig::default()
    };
    Ok(PyXiReport(xi_suite::run_xi_suite(&cfg).py()?))
}

#[pyclass(name = "Model", module = "spectral_bounds_py", frozen)]
struct PyModel(ModelManifold);

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn spherical_cap(n: u32, k: f64, radius: f64) -> PyResult<Self> {
        Ok(Self(ModelManifold::spherical_cap(n, k, radius).py()?))
    }

    #[staticmethod]
    fn hemisphere(n: u32, k: f64) -> PyResult<Self> {
        Ok(Self(ModelManifold::hemisphere(n, k).py()?))
    }

    #[staticmethod]
    fn euclidean_ball(n: u32, radius: f64) -> PyResult<Self> {
        Ok(Self(ModelManifold::euclidean_ball(n, radius).py()?))
    }

    #[staticmethod]
    fn interval(length: f64) -> PyResult<Self> {
        Ok(Self(ModelManifold::interval(length).py()?))
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.0.variant_name()
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.0.dimension()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.0.diameter()
    }

    #[getter]
    fn in_diameter(&self) -> f64 {
        self.0.in_diameter()
    }

    /// `(ricci_lower, boundary_mean_curvature)`.
    fn hypotheses(&self) -> PyResult<(f64, f64)> {
        let h = Hypotheses::of(&self.0).py()?;
        Ok((h.ricci_lower, h.mean_curvature))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "Solution", module = "spectral_bounds_py", frozen)]
struct PySolution(RadialEigenSolution);

#[pymethods]
impl PySolution {
    #[getter]
    fn eigenvalue(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.0.r_grid.clone()
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        self.0.v.clone()
    }

    #[getter]
    fn v_prime(&self) -> Vec<f64> {
        self.0.v_prime.clone()
    }

    #[getter]
    fn in_diameter(&self) -> f64 {
        self.0.in_diameter
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.name()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_report(&self) -> String {
        self.0.to_report()
    }
}

fn solver_config(method: &str, grid: Option<usize>, tol: Option<f64>) -> PyResult<SolverConfig> {
    let method: Method = method.parse().py()?;
    let mut cfg = SolverConfig::with_method(method);
    if let Some(g) = grid {
        cfg.grid_points = g;
    }
    if let Some(t) = tol {
        cfg.tolerance = t;
    }
    cfg.validate().py()?;
    Ok(cfg)
}

#[pyfunction]
#[pyo3(name = "solve", signature = (model, method="shooting", grid=None, tol=None))]
fn py_solve(model: &PyModel, method: &str, grid: Option<usize>, tol: Option<f64>) -> PyResult<PySolution> {
    let cfg = solver_config(method, grid, tol)?;
    Ok(PySolution(solver::solve(&model.0, &cfg).py()?))
}

#[pyclass(name = "VerificationReport", module = "spectral_bounds_py", frozen)]
struct PyVerificationReport(verify::VerificationReport);

#[pymethods]
impl PyVerificationReport {
    #[getter]
    fn eigenvalue(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }

    #[getter]
    fn all_pass(&self) -> bool {
        self.0.all_pass()
    }

    /// `(check_id, status, margin, threshold, out_of_hypothesis)` per check.
    fn checks(&self) -> Vec<(&'static str, &'static str, Option<f64>, f64, bool)> {
        self.0
            .entries
            .iter()
            .map(|e| (e.id.name(), e.status.name(), e.margin, e.threshold, e.out_of_hypothesis))
            .collect()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_report(&self) -> String {
        self.0.to_report()
    }
}

#[pyfunction]
#[pyo3(
    name = "verify",
    signature = (model, method="shooting", grid=None, tol=None, buckets=None, b_sequence=None, force_hypotheses=false)
)]
#[allow(clippy::too_many_arguments)]
fn py_verify(
    model: &PyModel,
    method: &str,
    grid: Option<usize>,
    tol: Option<f64>,
    buckets: Option<usize>,
    b_sequence: Option<Vec<f64>>,
    force_hypotheses: bool,
) -> PyResult<(PySolution, PyVerificationReport)> {
    let solver = solver_config(method, grid, tol)?;
    let mut checks = VerifyConfig {
        force_hypotheses,
        ..VerifyConfig::default()
    };
    if let Some(b) = buckets {
        checks.buckets = b;
    }
    if let Some(bs) = b_sequence {
        checks.b_sequence = bs;
    }
    let (sol, report) = verify::verify(&model.0, &solver, &checks).py()?;
    Ok((PySolution(sol), PyVerificationReport(report)))
}

/// Runs a sweep described by TOML text; returns `(csv, exit_status)`.
#[pyfunction]
#[pyo3(name = "sweep")]
fn py_sweep(py: Python<'_>, config: &str) -> PyResult<(String, i32)> {
    let cfg = RunConfig::parse(config).py()?;
    let specs = cfg.sweep_specs().py()?;
    let sweep_cfg = SweepConfig {
        solver: cfg.solver_config().py()?,
        verify: cfg.verify_config().py()?,
    };
    let table = py.detach(|| sweep::sweep(&specs, &sweep_cfg));
    Ok((table.to_csv(), table.exit_status()))
}

#[pymodule]
fn spectral_bounds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(py_reilly_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_zhong_yang_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_yang_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_improved_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_applicable_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(py_best_bound, m)?)?;
    m.add_function(wrap_pyfunction!(py_delta_of, m)?)?;
    m.add_function(wrap_pyfunction!(py_xi, m)?)?;
    m.add_function(wrap_pyfunction!(py_xi_derivatives, m)?)?;
    m.add_function(wrap_pyfunction!(py_z_eval, m)?)?;
    m.add_function(wrap_pyfunction!(py_xi_integral, m)?)?;
    m.add_function(wrap_pyfunction!(py_barrier_inequality_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(py_xi_property_suite, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify, m)?)?;
    m.add_function(wrap_pyfunction!(py_sweep, m)?)?;
    m.add_class::<PyModel>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyVerificationReport>()?;
    m.add_class::<PyXiReport>()?;
    Ok(())
}
