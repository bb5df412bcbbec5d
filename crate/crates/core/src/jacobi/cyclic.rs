//! Cyclic-by-row Jacobi.

use super::givens::{pair_unchecked, rotate_sym_unchecked, rotate_transposed};
use super::{SolveReport, SpectralResult};
use crate::matrix::{DenseMatrix, SymMatrix};
use crate::norms::off_norm;
use crate::precision::Real;

pub const DEFAULT_MAX_SWEEPS: usize = 10;

/// Cyclic-by-row Jacobi over `(p, q)` for `p < q`, row by row.
///
/// A pair is rotated when `|a_pq| > tol sqrt(|a_pp a_qq|)`. After a sweep
/// with at least one rotation the working copy is re-symmetrized and the
/// sweep counted; a sweep without rotations zeroes the off-diagonal and
/// reports convergence. Reaching `max_sweeps` counted sweeps stops with
/// `converged = false`.
pub fn jacobi_cyclic<T: Real>(a: &SymMatrix<T>, tol: T, max_sweeps: usize) -> SpectralResult<T> {
    let n = a.order();
    let mut work = a.clone();
    work.symmetrize();
    let mut vt = DenseMatrix::<T>::identity(n);
    let mut report = SolveReport::default();

    loop {
        let mut rotated = false;
        let data = work.as_mut_slice();
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = data[p * n + q];
                if !(apq.abs() > tol * (data[p * n + p] * data[q * n + q]).abs().sqrt()) {
                    continue;
                }
                let g = pair_unchecked(data, n, p, q);
                rotate_sym_unchecked(data, n, &g);
                data[p * n + q] = T::zero();
                data[q * n + p] = T::zero();
                rotate_transposed(vt.as_mut_slice(), n, &g);
                report.rotations += 1;
                rotated = true;
            }
        }
        if !rotated {
            work.zero_off_diagonal();
            report.converged = true;
            break;
        }
        work.symmetrize();
        report.sweeps += 1;
        report.off_history.push(off_norm(&work));
        if report.sweeps >= max_sweeps {
            break;
        }
    }

    SpectralResult {
        v: vt.transpose(),
        lambda: work.diag(),
        report,
    }
}
