//! Python bindings. Matrices cross the boundary as lists of rows.

use mpjacobi_core as core;
use mpjacobi_core::{DenseMatrix, LowPrecisionBackend, MixedOptions, Mode, SymMatrix, TestMatrixSpec};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

type Rows = Vec<Vec<f64>>;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(_) | core::Error::PolarNotConverged { .. } | core::Error::LowPrecisionNotConverged { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn dense(a: &Rows) -> PyResult<DenseMatrix<f64>> {
    if a.is_empty() {
        return Err(PyValueError::new_err("matrix has no rows"));
    }
    DenseMatrix::from_rows(a).map_err(to_py)
}

fn sym(a: &Rows) -> PyResult<SymMatrix<f64>> {
    SymMatrix::new(dense(a)?).map_err(to_py)
}

fn rows(m: &DenseMatrix<f64>) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn default_tol() -> f64 {
    core::mixed::default_tol()
}

/// Eigendecomposition from one of the Jacobi solvers. Column `j` of
/// `eigenvectors` belongs to `eigenvalues[j]`; both are unsorted.
#[pyclass(frozen, get_all)]
pub struct EigResult {
    eigenvalues: Vec<f64>,
    eigenvectors: Rows,
    sweeps: usize,
    rotations: usize,
    converged: bool,
}

impl EigResult {
    fn from_spectral(r: core::SpectralResult<f64>) -> Self {
        EigResult {
            eigenvectors: rows(&r.v),
            eigenvalues: r.lambda,
            sweeps: r.report.sweeps,
            rotations: r.report.rotations,
            converged: r.report.converged,
        }
    }
}

#[pymethods]
impl EigResult {
    fn __repr__(&self) -> String {
        format!(
            "EigResult(n={}, sweeps={}, rotations={}, converged={})",
            self.eigenvalues.len(),
            self.sweeps,
            self.rotations,
            self.converged
        )
    }
}

/// Output of the mixed-precision solver and its diagnostics.
#[pyclass(frozen, get_all)]
pub struct MixedResult {
    eigenvalues: Vec<f64>,
    eigenvectors: Rows,
    precondition_off_ratio: f64,
    sweeps: usize,
    rotations: usize,
    converged: bool,
    residual_ratio: f64,
    orthogonality_defect: f64,
    time_low_precision_s: f64,
    time_orthogonalize_s: f64,
    time_refine_s: f64,
}

impl MixedResult {
    fn new(r: core::MixedSolveResult) -> Self {
        MixedResult {
            eigenvectors: rows(&r.q),
            eigenvalues: r.lambda,
            precondition_off_ratio: r.precondition_off_ratio,
            sweeps: r.sweeps,
            rotations: r.rotations,
            converged: r.converged,
            residual_ratio: r.residual_ratio,
            orthogonality_defect: r.orthogonality_defect,
            time_low_precision_s: r.timings.low_precision.as_secs_f64(),
            time_orthogonalize_s: r.timings.orthogonalize.as_secs_f64(),
            time_refine_s: r.timings.refine.as_secs_f64(),
        }
    }
}

#[pymethods]
impl MixedResult {
    fn __repr__(&self) -> String {
        format!(
            "MixedResult(n={}, sweeps={}, residual_ratio={:.3e}, converged={})",
            self.eigenvalues.len(),
            self.sweeps,
            self.residual_ratio,
            self.converged
        )
    }
}

/// Random symmetric matrix with eigenvalue magnitudes from 1 down to 1/kappa.
#[pyfunction]
#[pyo3(signature = (n, kappa, mode = "geo", seed = 1))]
fn generate(n: usize, kappa: f64, mode: &str, seed: u64) -> PyResult<Rows> {
    let mode: Mode = mode.parse().map_err(to_py)?;
    let spec = TestMatrixSpec::new(n, kappa, mode, seed).map_err(to_py)?;
    Ok(rows(core::generate(&spec).map_err(to_py)?.as_dense()))
}

#[pyfunction]
#[pyo3(signature = (a, tol = None, max_sweeps = 10))]
fn jacobi_cyclic(py: Python<'_>, a: Rows, tol: Option<f64>, max_sweeps: usize) -> PyResult<EigResult> {
    let a = sym(&a)?;
    let tol = tol.unwrap_or_else(default_tol);
    Ok(EigResult::from_spectral(
        py.detach(|| core::jacobi_cyclic(&a, tol, max_sweeps)),
    ))
}

#[pyfunction]
#[pyo3(signature = (a, tol = None))]
fn jacobi_classical(py: Python<'_>, a: Rows, tol: Option<f64>) -> PyResult<EigResult> {
    let a = sym(&a)?;
    let tol = tol.unwrap_or_else(default_tol);
    Ok(EigResult::from_spectral(py.detach(|| core::jacobi_classical(&a, tol))))
}

/// Mixed-precision solve. `backend` picks the binary32 stage: "ql" or "jacobi".
#[pyfunction]
#[pyo3(signature = (a, tol = None, max_sweeps = 10, backend = "ql"))]
fn solve_mixed(py: Python<'_>, a: Rows, tol: Option<f64>, max_sweeps: usize, backend: &str) -> PyResult<MixedResult> {
    let a = sym(&a)?;
    let opts = MixedOptions {
        tol: tol.unwrap_or_else(default_tol),
        max_sweeps,
        backend: backend.parse::<LowPrecisionBackend>().map_err(to_py)?,
    };
    let r = py.detach(|| core::solve_mixed_with(&a, &opts)).map_err(to_py)?;
    Ok(MixedResult::new(r))
}

/// Plain binary64 cyclic Jacobi with the same diagnostics as `solve_mixed`.
#[pyfunction]
#[pyo3(signature = (a, tol = None, max_sweeps = 50))]
fn solve_unpreconditioned(py: Python<'_>, a: Rows, tol: Option<f64>, max_sweeps: usize) -> PyResult<MixedResult> {
    let a = sym(&a)?;
    let tol = tol.unwrap_or_else(default_tol);
    let r = py
        .detach(|| core::solve_unpreconditioned(&a, tol, max_sweeps))
        .map_err(to_py)?;
    Ok(MixedResult::new(r))
}

/// Returns `(q, r)`.
#[pyfunction]
fn householder_qr(a: Rows) -> PyResult<(Rows, Rows)> {
    let f = core::householder_qr(&dense(&a)?).map_err(to_py)?;
    Ok((rows(&f.q), rows(&f.r)))
}

/// Orthogonal polar factor by Newton iteration. Returns `(u, iterations)`.
#[pyfunction]
#[pyo3(signature = (a, tol = 1e-14, max_iters = 50))]
fn polar_newton(a: Rows, tol: f64, max_iters: usize) -> PyResult<(Rows, usize)> {
    let f = core::polar_newton(&dense(&a)?, tol, max_iters).map_err(to_py)?;
    Ok((rows(&f.u), f.iterations))
}

/// Fixed-count Newton–Schulz orthogonalization. Returns `(u, iterations)`.
#[pyfunction]
fn newton_schulz(q: Rows) -> PyResult<(Rows, usize)> {
    let f = core::newton_schulz(&dense(&q)?, None).map_err(to_py)?;
    Ok((rows(&f.u), f.iterations))
}

#[pyfunction]
fn off_norm(a: Rows) -> PyResult<f64> {
    Ok(core::off_norm(&sym(&a)?))
}

#[pyfunction]
fn fro_norm(a: Rows) -> PyResult<f64> {
    Ok(core::fro_norm(&dense(&a)?))
}

#[pyfunction]
fn orthogonality_defect(q: Rows) -> PyResult<f64> {
    Ok(core::orthogonality_defect(&dense(&q)?))
}

#[pymodule]
fn mpjacobi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<EigResult>()?;
    m.add_class::<MixedResult>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_cyclic, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_classical, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(solve_unpreconditioned, m)?)?;
    m.add_function(wrap_pyfunction!(householder_qr, m)?)?;
    m.add_function(wrap_pyfunction!(polar_newton, m)?)?;
    m.add_function(wrap_pyfunction!(newton_schulz, m)?)?;
    m.add_function(wrap_pyfunction!(off_norm, m)?)?;
    m.add_function(wrap_pyfunction!(fro_norm, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonality_defect, m)?)?;
    m.add("UNIT_ROUNDOFF_BINARY64", default_tol())?;
    m.add("UNIT_ROUNDOFF_BINARY32", f64::from(f32::EPSILON) / 2.0)?;
    Ok(())
}
