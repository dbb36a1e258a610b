//! Python bindings. Matrices cross the boundary as four row-major lists of
//! floats (`w, x, y, z` planes); images load as pure matrices with R, G, B
//! on the `x, y, z` planes.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use quatcomp::completion::{self, Method, SolverConfig, SolverReport, WeightSide};
use quatcomp::imaging::{self, ImageQ};
use quatcomp::qsvd;
use quatcomp::synth::SynthSpec;
use quatcomp::{Error, Mask, QMatrix};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "QMatrix", module = "quatcomp", from_py_object)]
#[derive(Clone)]
pub struct PyQMatrix {
    pub inner: QMatrix,
}

#[pymethods]
impl PyQMatrix {
    /// Builds a matrix from its four planes, each a row-major list of `rows * cols` floats.
    #[new]
    pub fn new(rows: usize, cols: usize, w: Vec<f64>, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> PyResult<Self> {
        let inner = QMatrix::from_planes(rows, cols, [w, x, y, z]).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { inner: QMatrix::zeros(rows, cols) }
    }

    #[staticmethod]
    pub fn identity(n: usize) -> Self {
        Self { inner: QMatrix::identity(n) }
    }

    /// Ground truth from a `synth:MxN:rank=K:scale=S:seed=T` descriptor.
    #[staticmethod]
    pub fn synthetic(descriptor: &str) -> PyResult<Self> {
        let spec: SynthSpec = descriptor.parse().map_err(to_py)?;
        Ok(Self { inner: spec.generate() })
    }

    #[staticmethod]
    pub fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    pub fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn planes(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let [w, x, y, z] = self.inner.planes().clone();
        (w, x, y, z)
    }

    pub fn get(&self, i: usize, j: usize) -> PyResult<(f64, f64, f64, f64)> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyValueError::new_err(format!("index ({i}, {j}) out of range")));
        }
        let q = self.inner.get(i, j);
        Ok((q.w, q.x, q.y, q.z))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn conj_transpose(&self) -> Self {
        Self { inner: self.inner.conj_transpose() }
    }

    pub fn matmul(&self, other: &PyQMatrix) -> PyResult<Self> {
        Ok(Self { inner: self.inner.matmul(&other.inner).map_err(to_py)? })
    }

    pub fn __matmul__(&self, other: &PyQMatrix) -> PyResult<Self> {
        self.matmul(other)
    }

    pub fn __add__(&self, other: &PyQMatrix) -> PyResult<Self> {
        self.check(other)?;
        Ok(Self { inner: &self.inner + &other.inner })
    }

    pub fn __sub__(&self, other: &PyQMatrix) -> PyResult<Self> {
        self.check(other)?;
        Ok(Self { inner: &self.inner - &other.inner })
    }

    pub fn __mul__(&self, s: f64) -> Self {
        Self { inner: self.inner.scale(s) }
    }

    pub fn __eq__(&self, other: &PyQMatrix) -> bool {
        self.inner == other.inner
    }

    pub fn __repr__(&self) -> String {
        format!("QMatrix({}x{}, norm={:.6})", self.inner.rows(), self.inner.cols(), self.inner.frobenius_norm())
    }
}

impl PyQMatrix {
    fn check(&self, other: &PyQMatrix) -> PyResult<()> {
        if self.inner.shape() != other.inner.shape() {
            return Err(PyValueError::new_err(format!(
                "shape mismatch: {:?} and {:?}",
                self.inner.shape(),
                other.inner.shape()
            )));
        }
        Ok(())
    }
}

#[pyclass(name = "Mask", module = "quatcomp", from_py_object)]
#[derive(Clone)]
pub struct PyMask {
    pub inner: Mask,
}

#[pymethods]
impl PyMask {
    /// `observed` is a row-major list of booleans, true where the entry is known.
    #[new]
    pub fn new(rows: usize, cols: usize, observed: Vec<bool>) -> PyResult<Self> {
        Ok(Self { inner: Mask::from_observed(rows, cols, observed).map_err(to_py)? })
    }

    /// Mask from a pattern descriptor such as `random:p=0.5:seed=7`.
    #[staticmethod]
    pub fn from_pattern(pattern: &str, rows: usize, cols: usize) -> PyResult<Self> {
        let patterns = imaging::parse_patterns(pattern).map_err(to_py)?;
        Ok(Self { inner: imaging::make_mask(&patterns, rows, cols).map_err(to_py)? })
    }

    #[staticmethod]
    pub fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: imaging::load_mask(&path).map_err(to_py)? })
    }

    pub fn save(&self, path: PathBuf) -> PyResult<()> {
        imaging::save_mask(&path, &self.inner).map_err(to_py)
    }

    #[getter]
    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn observed(&self) -> Vec<bool> {
        self.inner.bitmap().to_vec()
    }

    pub fn observed_count(&self) -> usize {
        self.inner.observed_count()
    }

    pub fn missing_fraction(&self) -> f64 {
        self.inner.missing_fraction()
    }

    pub fn project(&self, a: &PyQMatrix) -> PyResult<PyQMatrix> {
        Ok(PyQMatrix { inner: self.inner.project(&a.inner).map_err(to_py)? })
    }

    /// True when `x` and `m` agree bitwise on every observed entry.
    pub fn agrees(&self, x: &PyQMatrix, m: &PyQMatrix) -> bool {
        self.inner.agrees(&x.inner, &m.inner)
    }
}

#[pyclass(name = "SolverConfig", module = "quatcomp", from_py_object)]
#[derive(Clone)]
pub struct PySolverConfig {
    pub method: Method,
    pub inner: SolverConfig,
}

#[pymethods]
impl PySolverConfig {
    /// Published defaults for `method`, with optional overrides.
    #[new]
    #[pyo3(signature = (method = "dwqtnn", rank = 1, rho = None, step0 = None, step_max = None, outer_tol = None, max_outer = None, theta1 = None, theta2 = None, weight_side = None))]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        method: &str,
        rank: usize,
        rho: Option<f64>,
        step0: Option<f64>,
        step_max: Option<f64>,
        outer_tol: Option<f64>,
        max_outer: Option<usize>,
        theta1: Option<f64>,
        theta2: Option<f64>,
        weight_side: Option<&str>,
    ) -> PyResult<Self> {
        let method: Method = method.parse().map_err(to_py)?;
        let mut c = method.default_config(rank);
        c.rho = rho.unwrap_or(c.rho);
        c.step0 = step0.unwrap_or(c.step0);
        c.step_max = step_max.unwrap_or(c.step_max);
        c.outer_tol = outer_tol.unwrap_or(c.outer_tol);
        c.max_outer = max_outer.unwrap_or(c.max_outer);
        c.weights.theta1 = theta1.unwrap_or(c.weights.theta1);
        c.weights.theta2 = theta2.unwrap_or(c.weights.theta2);
        if let Some(side) = weight_side {
            c.weights.side = side.parse::<WeightSide>().map_err(to_py)?;
        }
        c.validate().map_err(to_py)?;
        Ok(Self { method, inner: c })
    }

    #[getter]
    pub fn method(&self) -> &'static str {
        self.method.as_str()
    }

    #[getter]
    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    pub fn rho(&self) -> f64 {
        self.inner.rho
    }

    #[getter]
    pub fn step0(&self) -> f64 {
        self.inner.step0
    }

    #[getter]
    pub fn outer_tol(&self) -> f64 {
        self.inner.outer_tol
    }

    #[getter]
    pub fn max_outer(&self) -> usize {
        self.inner.max_outer
    }

    pub fn __repr__(&self) -> String {
        format!("SolverConfig(method={:?}, rank={}, rho={}, step0={})", self.method.as_str(), self.inner.rank, self.inner.rho, self.inner.step0)
    }
}

#[pyclass(name = "SolverReport", module = "quatcomp", skip_from_py_object)]
pub struct PySolverReport {
    pub inner: SolverReport,
}

#[pymethods]
impl PySolverReport {
    #[getter]
    pub fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }

    #[getter]
    pub fn recovered(&self) -> PyQMatrix {
        PyQMatrix { inner: self.inner.recovered.clone() }
    }

    #[getter]
    pub fn outer_iterations(&self) -> usize {
        self.inner.outer_iterations
    }

    #[getter]
    pub fn inner_iterations(&self) -> usize {
        self.inner.inner_iterations
    }

    #[getter]
    pub fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    pub fn residual_history(&self) -> Vec<f64> {
        self.inner.residual_history.clone()
    }

    #[getter]
    pub fn objective_history(&self) -> Vec<f64> {
        self.inner.objective_history.clone()
    }

    #[getter]
    pub fn wall_seconds(&self) -> f64 {
        self.inner.wall_time.as_secs_f64()
    }

    #[getter]
    pub fn theorem5_bound(&self) -> Option<u64> {
        self.inner.theorem5_bound
    }

    pub fn __repr__(&self) -> String {
        format!(
            "SolverReport(method={:?}, iterations={}, converged={})",
            self.inner.method.as_str(),
            self.inner.outer_iterations,
            self.inner.converged
        )
    }
}

/// Quaternion SVD: returns `(U, sigma, V)` with `A = U diag(sigma) V^H`.
#[pyfunction]
pub fn qsvd_factors(a: &PyQMatrix) -> PyResult<(PyQMatrix, Vec<f64>, PyQMatrix)> {
    let f = qsvd::qsvd(&a.inner).map_err(to_py)?;
    Ok((PyQMatrix { inner: f.u }, f.sigma, PyQMatrix { inner: f.v }))
}

#[pyfunction]
pub fn singular_values(a: &PyQMatrix) -> PyResult<Vec<f64>> {
    Ok(qsvd::qsvd(&a.inner).map_err(to_py)?.sigma)
}

/// Singular value soft-thresholding by `tau`.
#[pyfunction]
pub fn qsvt(a: &PyQMatrix, tau: f64) -> PyResult<PyQMatrix> {
    Ok(PyQMatrix { inner: qsvd::qsvt(&a.inner, tau).map_err(to_py)? })
}

#[pyfunction]
pub fn nuclear_norm(a: &PyQMatrix) -> PyResult<f64> {
    qsvd::nuclear_norm(&a.inner).map_err(to_py)
}

#[pyfunction]
pub fn truncated_nuclear_norm(a: &PyQMatrix, r: usize) -> PyResult<f64> {
    qsvd::qtnn_value(&a.inner, r).map_err(to_py)
}

/// Runs the configured solver. The interpreter lock is released while it runs.
#[pyfunction]
pub fn complete(py: Python<'_>, m: &PyQMatrix, mask: &PyMask, config: &PySolverConfig) -> PyResult<PySolverReport> {
    let (m, mask, method, cfg) = (m.inner.clone(), mask.inner.clone(), config.method, config.inner.clone());
    let inner = py.detach(move || completion::complete(method, &m, &mask, &cfg)).map_err(to_py)?;
    Ok(PySolverReport { inner })
}

/// Iteration bound for the one-step solvers.
#[pyfunction]
pub fn theorem5_bound(eps1: f64, rho: f64, tol: f64, w1: Vec<f64>, w2: Vec<f64>, rows: usize, r: usize) -> PyResult<u64> {
    completion::theorem5_bound(eps1, rho, tol, &w1, &w2, rows, r).map_err(to_py)
}

/// Weight diagonals `(W1, W2)` derived from a mask.
#[pyfunction]
#[pyo3(signature = (mask, theta1, theta2, side = "rows"))]
pub fn build_weights(mask: &PyMask, theta1: f64, theta2: f64, side: &str) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let side: WeightSide = side.parse().map_err(to_py)?;
    let w = completion::build_weights(&mask.inner, theta1, theta2, side).map_err(to_py)?;
    Ok((w.w1, w.w2))
}

#[pyfunction]
pub fn load_image(path: PathBuf) -> PyResult<PyQMatrix> {
    Ok(PyQMatrix { inner: imaging::load_image(&path).map_err(to_py)?.into_matrix() })
}

/// Saves the clamped, rounded color planes as PNG (or PPM by extension).
#[pyfunction]
pub fn save_image(path: PathBuf, a: &PyQMatrix) -> PyResult<()> {
    imaging::save_image(&path, &ImageQ::from_recovered(&a.inner)).map_err(to_py)
}

/// PSNR in dB between two images given as matrices; both are quantized to 8 bits first.
#[pyfunction]
pub fn psnr(a: &PyQMatrix, b: &PyQMatrix) -> PyResult<f64> {
    imaging::psnr(&ImageQ::from_recovered(&a.inner), &ImageQ::from_recovered(&b.inner)).map_err(to_py)
}

#[pyfunction]
pub fn ssim(a: &PyQMatrix, b: &PyQMatrix) -> PyResult<f64> {
    imaging::ssim(&ImageQ::from_recovered(&a.inner), &ImageQ::from_recovered(&b.inner)).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "quatcomp")]
pub fn quatcomp_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQMatrix>()?;
    m.add_class::<PyMask>()?;
    m.add_class::<PySolverConfig>()?;
    m.add_class::<PySolverReport>()?;
    m.add_function(wrap_pyfunction!(qsvd_factors, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(qsvt, m)?)?;
    m.add_function(wrap_pyfunction!(nuclear_norm, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_nuclear_norm, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(theorem5_bound, m)?)?;
    m.add_function(wrap_pyfunction!(build_weights, m)?)?;
    m.add_function(wrap_pyfunction!(load_image, m)?)?;
    m.add_function(wrap_pyfunction!(save_image, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(ssim, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
