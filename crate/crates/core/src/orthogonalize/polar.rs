//! Orthogonal polar factor by Newton and Newton–Schulz iterations.

use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::matrix::DenseMatrix;
use crate::norms::fro_norm;

/// At or above this order Newton–Schulz takes three steps instead of two.
pub const NEWTON_SCHULZ_THRESHOLD: usize = 52_400;

/// Largest `||Q^T Q - I||_F` accepted by [`newton_schulz`]. Keeps every
/// singular value well inside `(0, sqrt 3)`.
pub const NEWTON_SCHULZ_GUARD: f64 = 0.1;

/// Orthogonal factor `U` of `A = U H` and the number of steps taken.
#[derive(Debug, Clone)]
pub struct PolarFactor {
    pub u: DenseMatrix<f64>,
    pub iterations: usize,
}

fn gram_defect(g: &DenseMatrix<f64>) -> f64 {
    let mut d = g.clone();
    d.sub_identity_mut();
    fro_norm(&d)
}

/// One Newton step `X <- (X + X^{-T}) / 2`.
pub fn polar_newton_step(x: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    let inv_t = Lu::factor(x)?.inverse_transpose();
    Ok(x.add(&inv_t)?.scale(0.5))
}

/// Newton iteration from `X_0 = A` until `||X^T X - I||_F <= tol`.
pub fn polar_newton(a: &DenseMatrix<f64>, tol: f64, max_iters: usize) -> Result<PolarFactor> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut x = a.clone();
    for k in 0..=max_iters {
        let defect = gram_defect(&x.t_matmul(&x)?);
        if defect <= tol {
            return Ok(PolarFactor { u: x, iterations: k });
        }
        if k == max_iters {
            return Err(Error::PolarNotConverged {
                iterations: k,
                defect,
                last: Box::new(x),
            });
        }
        x = polar_newton_step(&x)?;
    }
    unreachable!("the loop returns on its last iteration")
}

/// `X (3I - G) / 2` for `G = X^T X`.
fn step_with_gram(x: &DenseMatrix<f64>, g: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    let mut m = g.scale(-1.0);
    for i in 0..m.rows() {
        m[(i, i)] += 3.0;
    }
    x.gemm_impl(false, &m, false, 0.5)
}

/// One Newton–Schulz step `X (3I - X^T X) / 2`: two matrix products.
pub fn newton_schulz_step(x: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    step_with_gram(x, &x.t_matmul(x)?)
}

/// Number of fixed Newton–Schulz steps for an order-`n` input.
pub fn newton_schulz_steps(n: usize) -> usize {
    if n >= NEWTON_SCHULZ_THRESHOLD {
        3
    } else {
        2
    }
}

/// Fixed-count Newton–Schulz orthogonalization of a nearly orthogonal `Q`.
///
/// `n_override` replaces the order used to choose the step count.
pub fn newton_schulz(q: &DenseMatrix<f64>, n_override: Option<usize>) -> Result<PolarFactor> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let g = q.t_matmul(q)?;
    let defect = gram_defect(&g);
    if !(defect <= NEWTON_SCHULZ_GUARD) {
        return Err(Error::NotNearlyOrthogonal {
            defect,
            limit: NEWTON_SCHULZ_GUARD,
        });
    }
    let steps = newton_schulz_steps(n_override.unwrap_or(q.rows()));
    let mut x = step_with_gram(q, &g)?;
    for _ in 1..steps {
        x = newton_schulz_step(&x)?;
    }
    Ok(PolarFactor {
        u: x,
        iterations: steps,
    })
}

/// Scalar Newton–Schulz map `d (3 - d^2) / 2`.
pub fn newton_schulz_scalar(d: f64) -> f64 {
    0.5 * d * (3.0 - d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_trace_from_outside_the_basin() {
        let d1 = newton_schulz_scalar(2.2);
        let d2 = newton_schulz_scalar(d1);
        assert_eq!(format!("{d1:.4}"), "-2.0240");
        assert_eq!(format!("{d2:.4}"), "1.1097");
        assert!(newton_schulz_scalar(3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn newton_on_diagonal_follows_scalar_recurrence() {
        let a = DenseMatrix::diagonal(&[2.0, 0.5]);
        let x1 = polar_newton_step(&a).unwrap();
        assert!((x1[(0, 0)] - 1.25).abs() < 1e-15 && (x1[(1, 1)] - 1.25).abs() < 1e-15);
        let x2 = polar_newton_step(&x1).unwrap();
        assert!((x2[(0, 0)] - 1.025).abs() < 1e-15);
        let f = polar_newton(&a, 1e-14, 20).unwrap();
        assert!(f.u.sub(&DenseMatrix::identity(2)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn newton_reports_singular_and_non_convergence() {
        let z = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(polar_newton(&z, 1e-12, 5), Err(Error::Singular { .. })));
        let a = DenseMatrix::diagonal(&[1e6, 1.0]);
        match polar_newton(&a, 1e-14, 2) {
            Err(Error::PolarNotConverged {
                iterations: 2, last, ..
            }) => assert_eq!(last.rows(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn guard_rejects_far_from_orthogonal() {
        let a = DenseMatrix::diagonal(&[1.5, 1.0]);
        assert!(matches!(
            newton_schulz(&a, None),
            Err(Error::NotNearlyOrthogonal { .. })
        ));
    }

    #[test]
    fn step_count_rule() {
        assert_eq!(newton_schulz_steps(52_399), 2);
        assert_eq!(newton_schulz_steps(52_400), 3);
        let q = DenseMatrix::diagonal(&[1.0 + 1e-3, 1.0 - 1e-3]);
        assert_eq!(newton_schulz(&q, None).unwrap().iterations, 2);
        assert_eq!(newton_schulz(&q, Some(60_000)).unwrap().iterations, 3);
    }
}
