//! Experiment harness for the mpjacobi solvers: parameter grids, a bounded
//! worker pool and CSV output with a fixed column set.

pub mod config;
pub mod eig;
pub mod experiments;
pub mod pool;
pub mod rows;

pub use config::{default_threads, Experiment, ExperimentConfig, DEFAULT_REPEATS, THREADS_ENV};
pub use eig::{eig, EigReport, Method};
pub use experiments::{collect_rows, grid, run, Point, RunSummary, BASELINE_MAX_SWEEPS};
pub use rows::{write_csv, Row, COLUMNS};
