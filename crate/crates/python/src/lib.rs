//! Python bindings. Reports and sweep rows cross the boundary as plain dicts.

use harmonic_zeros::bounds;
use harmonic_zeros::dynamics::{self, OrbitConfig, Window};
use harmonic_zeros::gallery::{self, CatalogParams, InstanceSpec};
use harmonic_zeros::instance::InstanceFile;
use harmonic_zeros::roots::{find_roots as aberth, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use harmonic_zeros::solver::{self, SolverConfig};
use harmonic_zeros::winding::{self as wind, Circle, WindingConfig};
use harmonic_zeros::workflow::{self, PipelineConfig, SweepPath};
use harmonic_zeros::{Complex64, Error, Polynomial};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(harmonic_zeros, HarmonicZerosError, PyValueError);

fn err(e: Error) -> PyErr {
    HarmonicZerosError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// `p(z) / q(z)` with coprime `p`, `q`; coefficients in ascending order.
#[pyclass(name = "RationalFunction", module = "harmonic_zeros", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRational {
    inner: harmonic_zeros::RationalFunction,
}

#[pymethods]
impl PyRational {
    #[new]
    #[pyo3(signature = (p, q = None))]
    fn new(p: Vec<Complex64>, q: Option<Vec<Complex64>>) -> PyResult<Self> {
        let q = q.unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]);
        harmonic_zeros::RationalFunction::new(Polynomial::new(p), Polynomial::new(q))
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[getter]
    fn n_p(&self) -> usize {
        self.inner.n_p()
    }

    #[getter]
    fn n_q(&self) -> usize {
        self.inner.n_q()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn numerator(&self) -> Vec<Complex64> {
        self.inner.numerator().coeffs().to_vec()
    }

    #[getter]
    fn denominator(&self) -> Vec<Complex64> {
        self.inner.denominator().coeffs().to_vec()
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.inner.derivative_at(z)
    }

    /// `None` when `r` has a pole at infinity.
    fn value_at_infinity(&self) -> Option<Complex64> {
        self.inner.value_at_infinity()
    }

    /// `r - c`, i.e. the function whose harmonic zeros are those of `f_c`.
    fn shift(&self, c: Complex64) -> PyResult<Self> {
        self.inner.shift_numerator(c).map(|inner| Self { inner }).map_err(err)
    }

    /// Coefficients of the polynomial whose roots contain every zero of `f_c`.
    #[pyo3(signature = (c = Complex64::new(0.0, 0.0)))]
    fn fixed_point_polynomial(&self, c: Complex64) -> PyResult<Vec<Complex64>> {
        self.inner.fixed_point_polynomial(c).map(|p| p.coeffs().to_vec()).map_err(err)
    }

    fn critical_points(&self) -> PyResult<Vec<Complex64>> {
        dynamics::critical_points(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("RationalFunction(n_p={}, n_q={})", self.inner.n_p(), self.inner.n_q())
    }
}

#[pyclass(name = "Zero", module = "harmonic_zeros", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyZero {
    location: Complex64,
    r_prime_abs: f64,
    orientation: &'static str,
    residual: f64,
}

#[pymethods]
impl PyZero {
    fn __repr__(&self) -> String {
        format!(
            "Zero({}{:+}j, |r'|={:.6}, {})",
            self.location.re, self.location.im, self.r_prime_abs, self.orientation
        )
    }
}

#[pyclass(name = "ZeroSet", module = "harmonic_zeros", frozen, get_all)]
struct PyZeroSet {
    zeros: Vec<PyZero>,
    n_plus: usize,
    n_minus: usize,
    n_zero: usize,
    near_caustic: bool,
}

#[pymethods]
impl PyZeroSet {
    #[getter]
    fn total(&self) -> usize {
        self.zeros.len()
    }

    #[getter]
    fn is_regular(&self) -> bool {
        self.n_zero == 0
    }

    fn locations(&self) -> Vec<Complex64> {
        self.zeros.iter().map(|z| z.location).collect()
    }

    fn __len__(&self) -> usize {
        self.zeros.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ZeroSet(total={}, n_plus={}, n_minus={}, n_zero={})",
            self.zeros.len(),
            self.n_plus,
            self.n_minus,
            self.n_zero
        )
    }
}

fn solver_config(
    tol_root: Option<f64>,
    tol_accept: Option<f64>,
    tau_sing: Option<f64>,
    max_iter: Option<usize>,
) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    cfg.root_tol = tol_root.unwrap_or(cfg.root_tol);
    cfg.accept_tol = tol_accept.unwrap_or(cfg.accept_tol);
    cfg.tau_sing = tau_sing.unwrap_or(cfg.tau_sing);
    cfg.max_iter = max_iter.unwrap_or(cfg.max_iter);
    cfg
}

/// Zeros of `r(z) - conj(z) - c`, classified by `|r'|`.
#[pyfunction]
#[pyo3(signature = (r, c = Complex64::new(0.0, 0.0), *, tol_root = None, tol_accept = None, tau_sing = None, max_iter = None))]
fn solve(
    py: Python<'_>,
    r: &PyRational,
    c: Complex64,
    tol_root: Option<f64>,
    tol_accept: Option<f64>,
    tau_sing: Option<f64>,
    max_iter: Option<usize>,
) -> PyResult<PyZeroSet> {
    let cfg = solver_config(tol_root, tol_accept, tau_sing, max_iter);
    let set = py.detach(|| solver::solve(&r.inner, c, &cfg)).map_err(err)?;
    Ok(PyZeroSet {
        zeros: set
            .zeros
            .iter()
            .map(|z| PyZero {
                location: z.location,
                r_prime_abs: z.r_prime_abs,
                orientation: z.orientation.label(),
                residual: z.residual,
            })
            .collect(),
        n_plus: set.n_plus,
        n_minus: set.n_minus,
        n_zero: set.n_zero,
        near_caustic: set.near_caustic,
    })
}

/// Full report as a dict: zeros, counts, bound, argument principle, orbit
/// cross-check and invariant checks.
#[pyfunction]
#[pyo3(signature = (r, c = Complex64::new(0.0, 0.0), name = None))]
fn run_pipeline<'py>(
    py: Python<'py>,
    r: &PyRational,
    c: Complex64,
    name: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| workflow::run_pipeline(name, &r.inner, c, &PipelineConfig::default()))
        .map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn max_zero_bound(n_p: usize, n_q: usize) -> PyResult<usize> {
    bounds::max_zero_bound(n_p, n_q).map_err(err)
}

/// `N+ - N-` of a regular instance when it is determined by the degrees alone.
#[pyfunction]
fn expected_signature(n_p: usize, n_q: usize) -> Option<i64> {
    bounds::expected_signature(n_p, n_q)
}

#[pyfunction]
fn non_sense_preserving_bound(n_p: usize, n_q: usize) -> usize {
    bounds::non_sense_preserving_bound(n_p, n_q)
}

/// `(r_reduced, alpha)` with `r = r_reduced + alpha` and `deg p_reduced < deg q`.
#[pyfunction]
fn reduce_equal_degree(r: &PyRational) -> PyResult<(PyRational, Complex64)> {
    let (inner, alpha) = bounds::reduce_equal_degree(&r.inner).map_err(err)?;
    Ok((PyRational { inner }, alpha))
}

fn spec_tuple(spec: InstanceSpec) -> (PyRational, Complex64, String) {
    (PyRational { inner: spec.r }, spec.c, spec.name)
}

/// `(r, c, name)` for a catalog entry: monomialN, mpwN, rhieN or binary.
#[pyfunction]
#[pyo3(signature = (name, a = None, epsilon = None))]
fn gallery_instance(
    py: Python<'_>,
    name: &str,
    a: Option<f64>,
    epsilon: Option<f64>,
) -> PyResult<(PyRational, Complex64, String)> {
    let params = CatalogParams { a, epsilon };
    py.detach(|| gallery::catalog(name, &params)).map(spec_tuple).map_err(err)
}

#[pyfunction]
fn random_instance(n_p: usize, n_q: usize, seed: u64) -> PyResult<(PyRational, Complex64, String)> {
    gallery::random_instance(n_p, n_q, seed).map(spec_tuple).map_err(err)
}

/// Reads a JSON instance file; returns `(r, c, name)`.
#[pyfunction]
fn load_instance(path: std::path::PathBuf) -> PyResult<(PyRational, Complex64, Option<String>)> {
    let file = InstanceFile::read(&path).map_err(err)?;
    let (r, c) = file.to_instance().map_err(err)?;
    Ok((PyRational { inner: r }, c, file.name))
}

/// Winding number of `r(z) - conj(z) - c` along a circle.
#[pyfunction]
#[pyo3(signature = (r, c, radius, center = Complex64::new(0.0, 0.0)))]
fn winding_number(r: &PyRational, c: Complex64, radius: f64, center: Complex64) -> PyResult<i64> {
    let circle = Circle::new(center, radius).map_err(err)?;
    let f = |z: Complex64| r.inner.eval(z) - z.conj() - c;
    wind::winding_number(f, &circle, &WindingConfig::default())
        .map(|w| w.winding)
        .map_err(err)
}

/// Roots of a polynomial given by ascending coefficients.
#[pyfunction]
fn find_roots(coeffs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    aberth(&Polynomial::new(coeffs), DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)
        .map(|set| set.roots)
        .map_err(err)
}

/// Non-sense-preserving zeros found as limits of critical orbits; returns
/// `(zeros, unresolved_orbits)`.
#[pyfunction]
#[pyo3(signature = (r, c = Complex64::new(0.0, 0.0)))]
fn nonrepelling_zeros(py: Python<'_>, r: &PyRational, c: Complex64) -> PyResult<(Vec<Complex64>, usize)> {
    let search = py
        .detach(|| {
            dynamics::nonrepelling_zeros_via_orbits(&r.inner, c, &SolverConfig::default(), &OrbitConfig::default())
        })
        .map_err(err)?;
    Ok((search.zeros, search.unresolved))
}

/// Zero counts at `samples` equally spaced shifts from `start` to `end`.
#[pyfunction]
fn sweep<'py>(
    py: Python<'py>,
    r: &PyRational,
    start: Complex64,
    end: Complex64,
    samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let path = SweepPath::Segment { start, end, samples };
    let rows = py
        .detach(|| workflow::sweep(&r.inner, &path, &SolverConfig::default()))
        .map_err(err)?;
    to_py(py, &rows)
}

/// `[(z, c)]`: points of the critical curve in the window and their caustic images.
#[pyfunction]
#[pyo3(signature = (r, window = (-2.0, 2.0, -2.0, 2.0), grid = 400))]
fn caustic(
    py: Python<'_>,
    r: &PyRational,
    window: (f64, f64, f64, f64),
    grid: usize,
) -> PyResult<Vec<(Complex64, Complex64)>> {
    let window = Window::new(window.0, window.1, window.2, window.3).map_err(err)?;
    let rows = py.detach(|| workflow::caustic_scan(&r.inner, &window, grid)).map_err(err)?;
    Ok(rows
        .iter()
        .map(|row| (Complex64::new(row.z_re, row.z_im), Complex64::new(row.c_re, row.c_im)))
        .collect())
}

#[pymodule]
#[pyo3(name = "harmonic_zeros")]
fn harmonic_zeros_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HarmonicZerosError", m.py().get_type::<HarmonicZerosError>())?;
    m.add_class::<PyRational>()?;
    m.add_class::<PyZero>()?;
    m.add_class::<PyZeroSet>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(max_zero_bound, m)?)?;
    m.add_function(wrap_pyfunction!(expected_signature, m)?)?;
    m.add_function(wrap_pyfunction!(non_sense_preserving_bound, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_equal_degree, m)?)?;
    m.add_function(wrap_pyfunction!(gallery_instance, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    m.add_function(wrap_pyfunction!(winding_number, m)?)?;
    m.add_function(wrap_pyfunction!(find_roots, m)?)?;
    m.add_function(wrap_pyfunction!(nonrepelling_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(caustic, m)?)?;
    Ok(())
}
