use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Result};
use mpjacobi_core::jacobi::DEFAULT_MAX_SWEEPS;
use mpjacobi_core::mixed::default_tol;
use mpjacobi_core::{LowPrecisionBackend, Mode};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "MPJACOBI_THREADS";

/// Timing repetitions per point; the fastest one is reported.
pub const DEFAULT_REPEATS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    GenMatrix,
    Solve,
    CompareClassicCyclic,
    CompareOrthogonalizers,
    PreconditionBound,
    SweepCounts,
    TimingImprovement,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::GenMatrix,
        Experiment::Solve,
        Experiment::CompareClassicCyclic,
        Experiment::CompareOrthogonalizers,
        Experiment::PreconditionBound,
        Experiment::SweepCounts,
        Experiment::TimingImprovement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::GenMatrix => "gen-matrix",
            Experiment::Solve => "solve",
            Experiment::CompareClassicCyclic => "compare-classic-cyclic",
            Experiment::CompareOrthogonalizers => "compare-orthogonalizers",
            Experiment::PreconditionBound => "precondition-bound",
            Experiment::SweepCounts => "sweep-counts",
            Experiment::TimingImprovement => "timing-improvement",
        }
    }

    /// Whether rows carry wall-clock measurements worth repeating.
    pub fn is_timed(self) -> bool {
        matches!(
            self,
            Experiment::Solve
                | Experiment::CompareClassicCyclic
                | Experiment::CompareOrthogonalizers
                | Experiment::TimingImprovement
        )
    }

    /// Default `(n, kappa, modes)` grid. Desk scale keeps every experiment
    /// to minutes on one core.
    pub fn default_grid(self, full_scale: bool) -> (Vec<usize>, Vec<f64>, Vec<Mode>) {
        let both = Mode::ALL.to_vec();
        let steps = |lo: usize, hi: usize, step: usize| (lo..=hi).step_by(step).collect::<Vec<_>>();
        let kappas = vec![10.0, 100.0, 1e3, 1e4];
        match (self, full_scale) {
            (Experiment::GenMatrix, _) => (vec![100], vec![100.0], both),
            (Experiment::Solve, false) => (vec![100, 200], vec![100.0], both),
            (Experiment::Solve, true) => (steps(500, 3000, 500), vec![100.0], both),
            (Experiment::CompareClassicCyclic, false) => (steps(50, 250, 50), vec![100.0], vec![Mode::Geo]),
            (Experiment::CompareClassicCyclic, true) => (steps(100, 1000, 100), vec![100.0], vec![Mode::Geo]),
            (Experiment::CompareOrthogonalizers, false) => (steps(100, 500, 100), vec![100.0], vec![Mode::Geo]),
            (Experiment::CompareOrthogonalizers, true) => (steps(500, 3000, 500), vec![100.0], vec![Mode::Geo]),
            (Experiment::PreconditionBound | Experiment::SweepCounts, false) => (vec![50, 250, 500], kappas, both),
            (Experiment::PreconditionBound | Experiment::SweepCounts, true) => (steps(500, 3000, 500), kappas, both),
            (Experiment::TimingImprovement, false) => (steps(100, 500, 100), vec![500.0], both),
            (Experiment::TimingImprovement, true) => (steps(500, 3000, 500), vec![500.0], both),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL.into_iter().find(|e| e.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.as_str()).collect();
            anyhow::anyhow!("unknown experiment `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_grid: Vec<usize>,
    pub kappa_grid: Vec<f64>,
    pub modes: Vec<Mode>,
    pub seed: u64,
    pub tol: f64,
    pub max_sweeps: usize,
    pub output_path: PathBuf,
    pub threads: usize,
    pub repeats: usize,
    pub backend: LowPrecisionBackend,
    /// Matrix file solved instead of the generated grid (`solve` only).
    pub input: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Desk-scale (or full-scale) defaults for `experiment`.
    pub fn new(experiment: Experiment, output_path: impl Into<PathBuf>, full_scale: bool) -> Self {
        let (n_grid, kappa_grid, modes) = experiment.default_grid(full_scale);
        ExperimentConfig {
            experiment,
            n_grid,
            kappa_grid,
            modes,
            seed: 1,
            tol: default_tol(),
            max_sweeps: DEFAULT_MAX_SWEEPS,
            output_path: output_path.into(),
            threads: default_threads(),
            repeats: DEFAULT_REPEATS,
            backend: LowPrecisionBackend::default(),
            input: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.is_none() {
            ensure!(!self.n_grid.is_empty(), "n grid is empty");
            ensure!(!self.kappa_grid.is_empty(), "kappa grid is empty");
            ensure!(!self.modes.is_empty(), "mode list is empty");
        } else if self.experiment != Experiment::Solve {
            bail!("an input matrix is only accepted by the `solve` experiment");
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < 2) {
            bail!("matrix order must be at least 2, got {n}");
        }
        if let Some(k) = self.kappa_grid.iter().find(|k| !(k.is_finite() && **k >= 1.0)) {
            bail!("kappa must be finite and at least 1, got {k}");
        }
        ensure!(
            self.tol > 0.0 && self.tol.is_finite(),
            "tol must be positive, got {}",
            self.tol
        );
        ensure!(self.max_sweeps > 0, "max sweeps must be at least 1");
        ensure!(self.threads > 0, "thread count must be at least 1");
        ensure!(self.repeats > 0, "repeat count must be at least 1");
        Ok(())
    }
}

/// Worker count from the environment, falling back to one. Timing rows are
/// only meaningful with a single worker per core.
pub fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or(1)
}
