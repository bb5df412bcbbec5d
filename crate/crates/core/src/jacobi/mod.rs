//! Jacobi eigensolvers for dense symmetric matrices.
//!
//! The two solvers use different stopping tests on purpose. The classical
//! solver rotates while `|a_pq| > tol * ||A||_2 * sqrt(|a_pp a_qq|)`; the
//! cyclic solver omits the `||A||_2` factor. Callers normalize through `tol`.

mod classical;
mod cyclic;
mod givens;

pub use classical::{jacobi_classical, jacobi_classical_observed, max_off, DEFAULT_ROTATION_CAP_SWEEPS};
pub use cyclic::{jacobi_cyclic, DEFAULT_MAX_SWEEPS};
pub use givens::{apply_rotation_right, apply_rotation_sym, jacobi_pair, GivensPair};

use crate::matrix::DenseMatrix;
use crate::precision::Real;

/// Bookkeeping for one solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    pub rotations: usize,
    /// Completed sweeps. A classical sweep is `n(n-1)/2` rotations.
    pub sweeps: usize,
    /// `off(A)` after each completed sweep.
    pub off_history: Vec<f64>,
    pub converged: bool,
}

/// `A V = V diag(lambda)`, eigenvalues in the order the solver left them.
#[derive(Clone)]
pub struct SpectralResult<T = f64> {
    pub v: DenseMatrix<T>,
    pub lambda: Vec<T>,
    pub report: SolveReport,
}

impl<T: Real> std::fmt::Debug for SpectralResult<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralResult")
            .field("v", &self.v)
            .field("lambda", &self.lambda)
            .field("report", &self.report)
            .finish()
    }
}

impl<T: Real> SpectralResult<T> {
    /// Eigenpairs reordered by ascending eigenvalue.
    pub fn sorted(&self) -> SpectralResult<T> {
        let perm = sort_permutation(&self.lambda);
        let n = self.v.rows();
        let v = DenseMatrix::from_fn(n, perm.len(), |i, j| self.v[(i, perm[j])]);
        SpectralResult {
            v,
            lambda: perm.iter().map(|&k| self.lambda[k]).collect(),
            report: self.report.clone(),
        }
    }
}

/// Indices that sort `values` ascending (stable; NaNs last).
pub fn sort_permutation<T: Real>(values: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        a.partial_cmp(&b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan()))
    });
    idx
}

/// `values` sorted ascending, as binary64.
pub fn sorted_eigenvalues<T: Real>(values: &[T]) -> Vec<f64> {
    sort_permutation(values)
        .into_iter()
        .map(|k| values[k].as_f64())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_permutes_columns_with_values() {
        let r = SpectralResult {
            v: DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap(),
            lambda: vec![3.0, -1.0, 2.0],
            report: SolveReport::default(),
        };
        let s = r.sorted();
        assert_eq!(s.lambda, vec![-1.0, 2.0, 3.0]);
        assert_eq!(s.v.row(0), &[2.0, 3.0, 1.0]);
        assert_eq!(s.v.row(1), &[5.0, 6.0, 4.0]);
    }

    #[test]
    fn nan_sorts_last() {
        assert_eq!(sort_permutation(&[f64::NAN, 1.0, 0.0]), vec![2, 1, 0]);
    }
}
