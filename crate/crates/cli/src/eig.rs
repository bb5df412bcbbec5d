//! Single-matrix driver behind `mpjacobi eig`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use mpjacobi_core::mixed::residual_ratio;
use mpjacobi_core::norms::TWO_NORM_ITERS;
use mpjacobi_core::{
    jacobi_classical_observed, jacobi_cyclic, orthogonality_defect, solve_mixed_with, sort_permutation,
    two_norm_estimate, LowPrecisionBackend, MixedOptions, SymMatrix,
};

use crate::rows::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Classical,
    Cyclic,
    Mixed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Cyclic => "cyclic",
            Method::Mixed => "mixed",
        }
    }
}

impl FromStr for Method {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Method::Classical),
            "cyclic" => Ok(Method::Cyclic),
            "mixed" => Ok(Method::Mixed),
            _ => bail!("unknown method `{s}` (expected classical, cyclic or mixed)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigReport {
    pub method: Method,
    pub n: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
    pub rotations: usize,
    pub converged: bool,
    pub residual_ratio: f64,
    pub orthogonality_defect: f64,
    pub elapsed: Duration,
}

/// Solves `a` with `method`. For the classical method `max_sweeps` caps the
/// rotation count at `max_sweeps * n (n - 1) / 2`.
pub fn eig(
    a: &SymMatrix<f64>,
    method: Method,
    tol: f64,
    max_sweeps: usize,
    backend: LowPrecisionBackend,
) -> Result<EigReport> {
    if tol.is_nan() || tol <= 0.0 || max_sweeps == 0 {
        bail!("tol must be positive and max sweeps at least 1");
    }
    let n = a.order();
    let t = Instant::now();
    let (q, lambda, sweeps, rotations, converged) = match method {
        Method::Classical => {
            let cap = max_sweeps * (n * n.saturating_sub(1) / 2).max(1);
            let r = jacobi_classical_observed(a, tol, cap, |_, _| {});
            (r.v, r.lambda, r.report.sweeps, r.report.rotations, r.report.converged)
        }
        Method::Cyclic => {
            let r = jacobi_cyclic(a, tol, max_sweeps);
            (r.v, r.lambda, r.report.sweeps, r.report.rotations, r.report.converged)
        }
        Method::Mixed => {
            let r = solve_mixed_with(
                a,
                &MixedOptions {
                    tol,
                    max_sweeps,
                    backend,
                },
            )?;
            (r.q, r.lambda, r.sweeps, r.rotations, r.converged)
        }
    };
    let elapsed = t.elapsed();
    let norm_a = two_norm_estimate(a, TWO_NORM_ITERS);
    Ok(EigReport {
        method,
        n,
        eigenvalues: sort_permutation(&lambda).into_iter().map(|i| lambda[i]).collect(),
        sweeps,
        rotations,
        converged,
        residual_ratio: residual_ratio(a, &q, &lambda, norm_a),
        orthogonality_defect: orthogonality_defect(&q),
        elapsed,
    })
}

impl EigReport {
    pub fn to_row(&self) -> Row {
        let mut row = Row::new("eig", self.n, None, None, None, self.method.as_str());
        row.sweeps = Some(self.sweeps);
        row.rotations = Some(self.rotations);
        row.residual_ratio = Some(self.residual_ratio);
        row.orthogonality_defect = Some(self.orthogonality_defect);
        row.time_total_s = Some(self.elapsed.as_secs_f64());
        if !self.converged {
            row.error = Some("not converged".into());
        }
        row
    }

    /// Human-readable report for stdout.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "method: {}", self.method.as_str());
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "eigenvalues:");
        for x in &self.eigenvalues {
            let _ = writeln!(s, "  {x:.16e}");
        }
        let _ = writeln!(s, "sweeps: {}", self.sweeps);
        let _ = writeln!(s, "rotations: {}", self.rotations);
        let _ = writeln!(s, "converged: {}", self.converged);
        let _ = writeln!(s, "residual_ratio: {:.3e}", self.residual_ratio);
        let _ = writeln!(s, "orthogonality_defect: {:.3e}", self.orthogonality_defect);
        let _ = writeln!(s, "time_s: {:.6}", self.elapsed.as_secs_f64());
        s
    }
}
