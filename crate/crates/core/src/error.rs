use thiserror::Error;

use crate::matrix::DenseMatrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {defect:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix must be non-empty")]
    Empty,

    #[error("invalid rotation pair ({p}, {q}) for a matrix of order {n}; need p < q < n")]
    InvalidPair { p: usize, q: usize, n: usize },

    #[error("entry ({row}, {col}) = {value:e} overflows binary32")]
    Overflow { row: usize, col: usize, value: f64 },

    #[error("the zero vector has no Householder reflector")]
    ZeroVector,

    #[error("matrix is singular to working precision (zero pivot at column {column})")]
    Singular { column: usize },

    #[error("polar Newton iteration did not reach tolerance after {iterations} iterations (defect {defect:e})")]
    PolarNotConverged {
        iterations: usize,
        defect: f64,
        last: Box<DenseMatrix<f64>>,
    },

    #[error("input is not nearly orthogonal: ||Q^T Q - I||_F = {defect:e} > {limit}")]
    NotNearlyOrthogonal { defect: f64, limit: f64 },

    #[error("low-precision eigensolver did not converge in {sweeps} sweeps")]
    LowPrecisionNotConverged {
        sweeps: usize,
        partial: Box<crate::mixed::LowPrecisionEig>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed matrix text: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
