//! Mixed-precision preconditioned Jacobi.
//!
//! 1. Eigenvectors of `A` rounded to binary32, computed in binary32.
//! 2. Two (or three) Newton–Schulz steps in binary64 make them orthogonal
//!    to working precision, giving `Q_d`.
//! 3. `A_cond = Q_d^T A Q_d` is nearly diagonal.
//! 4. Cyclic Jacobi on `A_cond` in binary64 finishes in a few sweeps, and
//!    the eigenvectors of `A` are `Q_d V`.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::jacobi::{jacobi_cyclic, SolveReport, DEFAULT_MAX_SWEEPS};
use crate::matrix::{demote_sym, promote, DenseMatrix, SymMatrix};
use crate::norms::{
    eigen_residual, off_norm, orthogonality_defect, spectral_norm_estimate, two_norm_estimate, TWO_NORM_ITERS,
};
use crate::orthogonalize::newton_schulz;
use crate::precision::{Precision, Real};
use crate::tridiagonal::symmetric_eig_ql;

/// Sweep budget of the binary32 stage.
pub const LOW_PRECISION_MAX_SWEEPS: usize = 15;

/// Output of the binary32 eigensolve, promoted to binary64.
#[derive(Debug, Clone)]
pub struct LowPrecisionEig {
    pub q: DenseMatrix<f64>,
    pub lambda: Vec<f64>,
    pub report: SolveReport,
}

/// Which binary32 eigensolver runs the first stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LowPrecisionBackend {
    /// Cyclic Jacobi with `tol = u_low` and at most 15 sweeps.
    Jacobi,
    /// Householder tridiagonalization plus implicit QL.
    #[default]
    TridiagonalQl,
}

impl LowPrecisionBackend {
    pub fn as_str(self) -> &'static str {
        match self {
            LowPrecisionBackend::Jacobi => "jacobi",
            LowPrecisionBackend::TridiagonalQl => "ql",
        }
    }
}

impl std::str::FromStr for LowPrecisionBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jacobi" => Ok(LowPrecisionBackend::Jacobi),
            "ql" | "tridiagonal" => Ok(LowPrecisionBackend::TridiagonalQl),
            _ => Err(Error::InvalidParameter(format!(
                "unknown backend `{s}` (expected jacobi or ql)"
            ))),
        }
    }
}

/// Eigendecomposition of `A` rounded to binary32 with the default backend.
pub fn low_precision_eig(a: &SymMatrix<f64>) -> Result<LowPrecisionEig> {
    low_precision_eig_with(a, LowPrecisionBackend::default())
}

/// Eigendecomposition of `A` rounded to binary32, computed in binary32 and
/// promoted. Non-convergence is an error carrying the partial result.
pub fn low_precision_eig_with(a: &SymMatrix<f64>, backend: LowPrecisionBackend) -> Result<LowPrecisionEig> {
    let low = demote_sym(a)?;
    let r = match backend {
        LowPrecisionBackend::Jacobi => jacobi_cyclic(&low, f32::unit_roundoff(), LOW_PRECISION_MAX_SWEEPS),
        LowPrecisionBackend::TridiagonalQl => symmetric_eig_ql(&low),
    };
    let out = LowPrecisionEig {
        q: promote(&r.v),
        lambda: r.lambda.iter().map(|&x| x as f64).collect(),
        report: r.report,
    };
    if out.report.converged {
        Ok(out)
    } else {
        Err(Error::LowPrecisionNotConverged {
            sweeps: out.report.sweeps,
            partial: Box::new(out),
        })
    }
}

/// `(Q^T A Q + (Q^T A Q)^T) / 2`.
pub fn precondition(a: &SymMatrix<f64>, qd: &DenseMatrix<f64>) -> Result<SymMatrix<f64>> {
    let n = a.order();
    if qd.rows() != n || qd.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", qd.rows(), qd.cols()),
        });
    }
    let aq = a.as_dense().matmul(qd)?;
    SymMatrix::symmetrized(qd.t_matmul(&aq)?)
}

/// Wall-clock time per stage. Stage 1 is the binary32 eigensolve, stage 2
/// the orthogonalization, stage 3 preconditioning plus the binary64 Jacobi
/// and the final product. An unpreconditioned solve spends everything in
/// stage 3.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub low_precision: Duration,
    pub orthogonalize: Duration,
    pub refine: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.low_precision + self.orthogonalize + self.refine
    }
}

#[derive(Debug, Clone)]
pub struct MixedSolveResult {
    pub q: DenseMatrix<f64>,
    pub lambda: Vec<f64>,
    /// `off(A_cond) / ||A||_2`; for an unpreconditioned solve, `off(A) / ||A||_2`.
    pub precondition_off_ratio: f64,
    /// Counted sweeps of the binary64 Jacobi stage.
    pub sweeps: usize,
    /// Rotations of the binary64 Jacobi stage.
    pub rotations: usize,
    pub converged: bool,
    /// `||A Q - Q diag(lambda)||_2 / ||A||_2`.
    pub residual_ratio: f64,
    /// `||Q^T Q - I||_F`.
    pub orthogonality_defect: f64,
    pub low_precision_sweeps: usize,
    pub low_precision_converged: bool,
    /// `off` after each binary64 sweep.
    pub off_history: Vec<f64>,
    pub timings: StageTimings,
}

/// Settings of [`solve_mixed_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedOptions {
    /// Threshold of the binary64 cyclic Jacobi stage.
    pub tol: f64,
    pub max_sweeps: usize,
    pub backend: LowPrecisionBackend,
}

impl Default for MixedOptions {
    fn default() -> Self {
        MixedOptions {
            tol: default_tol(),
            max_sweeps: DEFAULT_MAX_SWEEPS,
            backend: LowPrecisionBackend::default(),
        }
    }
}

/// Full mixed-precision pipeline with the default low-precision backend.
pub fn solve_mixed(a: &SymMatrix<f64>, tol: f64, max_sweeps: usize) -> Result<MixedSolveResult> {
    solve_mixed_with(
        a,
        &MixedOptions {
            tol,
            max_sweeps,
            ..MixedOptions::default()
        },
    )
}

/// Full mixed-precision pipeline. Diagnostics are computed after timing.
pub fn solve_mixed_with(a: &SymMatrix<f64>, opts: &MixedOptions) -> Result<MixedSolveResult> {
    let MixedOptions {
        tol,
        max_sweeps,
        backend,
    } = *opts;
    check_params(tol, max_sweeps)?;

    let t0 = Instant::now();
    let low = match low_precision_eig_with(a, backend) {
        Ok(l) => l,
        Err(Error::LowPrecisionNotConverged { partial, .. }) => *partial,
        Err(e) => return Err(e),
    };
    let t1 = Instant::now();
    let qd = newton_schulz(&low.q, None)?.u;
    let t2 = Instant::now();
    let a_cond = precondition(a, &qd)?;
    let refined = jacobi_cyclic(&a_cond, tol, max_sweeps);
    let q = qd.matmul(&refined.v)?;
    let t3 = Instant::now();

    let norm_a = two_norm_estimate(a, TWO_NORM_ITERS);
    Ok(MixedSolveResult {
        precondition_off_ratio: ratio(off_norm(&a_cond), norm_a),
        residual_ratio: residual_ratio(a, &q, &refined.lambda, norm_a),
        orthogonality_defect: orthogonality_defect(&q),
        q,
        lambda: refined.lambda,
        sweeps: refined.report.sweeps,
        rotations: refined.report.rotations,
        converged: refined.report.converged,
        low_precision_sweeps: low.report.sweeps,
        low_precision_converged: low.report.converged,
        off_history: refined.report.off_history,
        timings: StageTimings {
            low_precision: t1 - t0,
            orthogonalize: t2 - t1,
            refine: t3 - t2,
        },
    })
}

/// Plain binary64 cyclic Jacobi reported in the same shape as [`solve_mixed`].
pub fn solve_unpreconditioned(a: &SymMatrix<f64>, tol: f64, max_sweeps: usize) -> Result<MixedSolveResult> {
    check_params(tol, max_sweeps)?;
    let t0 = Instant::now();
    let r = jacobi_cyclic(a, tol, max_sweeps);
    let elapsed = t0.elapsed();

    let norm_a = two_norm_estimate(a, TWO_NORM_ITERS);
    Ok(MixedSolveResult {
        precondition_off_ratio: ratio(off_norm(a), norm_a),
        residual_ratio: residual_ratio(a, &r.v, &r.lambda, norm_a),
        orthogonality_defect: orthogonality_defect(&r.v),
        q: r.v,
        lambda: r.lambda,
        sweeps: r.report.sweeps,
        rotations: r.report.rotations,
        converged: r.report.converged,
        low_precision_sweeps: 0,
        low_precision_converged: true,
        off_history: r.report.off_history,
        timings: StageTimings {
            refine: elapsed,
            ..StageTimings::default()
        },
    })
}

/// Default tolerance of the binary64 stage.
pub fn default_tol() -> f64 {
    Precision::Working.unit_roundoff()
}

fn check_params(tol: f64, max_sweeps: usize) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if max_sweeps == 0 {
        return Err(Error::InvalidParameter("max_sweeps must be at least 1".into()));
    }
    Ok(())
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// `||A Q - Q diag(lambda)||_2 / ||A||_2` with both norms estimated.
pub fn residual_ratio(a: &SymMatrix<f64>, q: &DenseMatrix<f64>, lambda: &[f64], norm_a: f64) -> f64 {
    let r = eigen_residual(a, q, lambda);
    ratio(spectral_norm_estimate(&r, TWO_NORM_ITERS), norm_a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_a_no_op() {
        let a = SymMatrix::diagonal(&[4.0, -2.0, 1.0]);
        for backend in [LowPrecisionBackend::Jacobi, LowPrecisionBackend::TridiagonalQl] {
            let low = low_precision_eig_with(&a, backend).unwrap();
            assert_eq!(low.q, DenseMatrix::identity(3));
        }
        let r = solve_mixed(&a, default_tol(), 10).unwrap();
        assert_eq!(r.sweeps, 0);
        assert_eq!(r.lambda, vec![4.0, -2.0, 1.0]);
        assert_eq!(r.q, DenseMatrix::identity(3));
        assert_eq!(r.residual_ratio, 0.0);
        let u = solve_unpreconditioned(&a, default_tol(), 10).unwrap();
        assert_eq!(u.sweeps, 0);
        assert_eq!(u.rotations, 0);
    }

    #[test]
    fn identity_preconditioner_keeps_the_matrix() {
        let a = SymMatrix::from_rows(&[[1.0, 0.25, 0.5], [0.25, 2.0, -0.75], [0.5, -0.75, 3.0]]).unwrap();
        let c = precondition(&a, &DenseMatrix::identity(3)).unwrap();
        assert_eq!(c, a);
        assert!(precondition(&a, &DenseMatrix::identity(2)).is_err());
    }

    #[test]
    fn parameters_are_validated() {
        let a = SymMatrix::diagonal(&[1.0, 2.0]);
        assert!(solve_mixed(&a, 0.0, 10).is_err());
        assert!(solve_mixed(&a, 1e-16, 0).is_err());
        assert!(solve_unpreconditioned(&a, -1.0, 10).is_err());
    }

    #[test]
    fn overflowing_input_is_rejected() {
        let a = SymMatrix::diagonal(&[1e300, 1.0]);
        assert!(matches!(
            solve_mixed(&a, default_tol(), 10),
            Err(Error::Overflow { .. })
        ));
    }
}
