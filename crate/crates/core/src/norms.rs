//! Matrix norms. All results are accumulated and returned in binary64.

use crate::matrix::{DenseMatrix, SymMatrix};
use crate::precision::Real;

/// Number of power-iteration steps used wherever a 2-norm is needed.
pub const TWO_NORM_ITERS: usize = 100;

/// Frobenius norm, scaled by the largest entry so squares cannot overflow.
pub fn fro_norm<T: Real>(a: &DenseMatrix<T>) -> f64 {
    scaled_sqrt_sum_sq(a.as_slice().iter().map(|x| x.as_f64()))
}

/// Frobenius norm of the off-diagonal part.
///
/// Sums the off-diagonal squares directly rather than subtracting the
/// diagonal from the full norm, so a diagonal matrix gives exactly 0.
pub fn off_norm<T: Real>(a: &SymMatrix<T>) -> f64 {
    off_norm_dense(a.as_dense())
}

pub(crate) fn off_norm_dense<T: Real>(a: &DenseMatrix<T>) -> f64 {
    let n = a.cols();
    scaled_sqrt_sum_sq(
        a.as_slice()
            .iter()
            .enumerate()
            .filter(|(k, _)| k / n != k % n)
            .map(|(_, x)| x.as_f64()),
    )
}

fn scaled_sqrt_sum_sq(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let scale = values.clone().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = values.map(|x| (x / scale) * (x / scale)).sum();
    scale * sum.sqrt()
}

fn vec_norm(x: &[f64]) -> f64 {
    scaled_sqrt_sum_sq(x.iter().copied())
}

/// Lower estimate of `||A||_2 = max |lambda|` by power iteration from the
/// normalized all-ones vector.
///
/// Each step returns `||A x||` for a unit `x`, which never exceeds `||A||_2`.
/// If the all-ones vector lies in the null space of a nonzero `A`, the
/// iteration restarts from an irregular vector.
pub fn two_norm_estimate<T: Real>(a: &SymMatrix<T>, iters: usize) -> f64 {
    let a = a.as_dense().map(|x| x.as_f64());
    let est = power_iteration(ones(a.rows()), iters, |x| a.matvec(x));
    if est == 0.0 && a.max_abs() != 0.0 {
        return power_iteration(irregular(a.rows()), iters, |x| a.matvec(x));
    }
    est
}

/// Lower estimate of the spectral norm of a general matrix, by power
/// iteration on `R^T R`.
///
/// Starts from an irregular deterministic vector rather than all-ones, which
/// is orthogonal to the row space of structured residuals surprisingly often.
pub fn spectral_norm_estimate<T: Real>(r: &DenseMatrix<T>, iters: usize) -> f64 {
    let r = r.map(|x| x.as_f64());
    let est_sq = power_iteration(irregular(r.cols()), iters, |x| r.t_matvec(&r.matvec(x)));
    est_sq.sqrt()
}

fn ones(n: usize) -> Vec<f64> {
    vec![1.0; n]
}

/// `x_i = 1 + frac(i * golden ratio)`: positive, with no simple pattern.
fn irregular(n: usize) -> Vec<f64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (0..n).map(|i| 1.0 + (i as f64 * PHI).fract()).collect()
}

fn power_iteration(start: Vec<f64>, iters: usize, apply: impl Fn(&[f64]) -> Vec<f64>) -> f64 {
    let n0 = vec_norm(&start);
    if n0 == 0.0 {
        return 0.0;
    }
    let mut x: Vec<f64> = start.into_iter().map(|v| v / n0).collect();
    let mut best = 0.0f64;
    for _ in 0..iters.max(1) {
        let y = apply(&x);
        let norm = vec_norm(&y);
        best = best.max(norm);
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        x = y.into_iter().map(|v| v / norm).collect();
    }
    best
}

/// `||Q^T Q - I||_F`.
pub fn orthogonality_defect<T: Real>(q: &DenseMatrix<T>) -> f64 {
    let q = q.map(|x| x.as_f64());
    let mut g = q.t_matmul(&q).expect("Q^T Q is always conformable");
    g.sub_identity_mut();
    fro_norm(&g)
}

/// `A V - V diag(lambda)`, formed in binary64.
pub fn eigen_residual<T: Real>(a: &SymMatrix<T>, v: &DenseMatrix<f64>, lambda: &[f64]) -> DenseMatrix<f64> {
    let a = a.as_dense().map(|x| x.as_f64());
    let av = a.matmul(v).expect("eigenvector matrix must match the matrix order");
    let vl = v.scale_columns(lambda).expect("one eigenvalue per column");
    av.sub(&vl).expect("shapes agree")
}
