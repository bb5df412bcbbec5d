use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mpjacobi_bench::{eig, run, write_csv, Experiment, ExperimentConfig, Method, DEFAULT_REPEATS, THREADS_ENV};
use mpjacobi_core::io::{load_matrix, write_matrix};
use mpjacobi_core::jacobi::DEFAULT_MAX_SWEEPS;
use mpjacobi_core::mixed::default_tol;
use mpjacobi_core::{generate, LowPrecisionBackend, Mode, SymMatrix, TestMatrixSpec};

#[derive(Parser)]
#[command(
    name = "mpjacobi",
    version,
    about = "Mixed-precision Jacobi eigensolver: generator, solver and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random symmetric test matrix with a prescribed spectrum.
    Gen(GenArgs),
    /// Solve one matrix file and print its sorted eigenvalues.
    Eig(EigArgs),
    /// Run an experiment grid and write one CSV row per point and method.
    Bench(BenchArgs),
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: mpjacobi_core::Error| e.to_string())
}

fn parse_backend(s: &str) -> Result<LowPrecisionBackend, String> {
    s.parse().map_err(|e: mpjacobi_core::Error| e.to_string())
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Condition number: eigenvalue magnitudes run from 1 down to 1/kappa.
    #[arg(long)]
    kappa: f64,
    #[arg(long, default_value = "geo", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigArgs {
    /// Matrix in the `rows cols` text format.
    path: PathBuf,
    #[arg(long, default_value = "mixed", value_parser = |s: &str| s.parse::<Method>().map_err(|e| e.to_string()))]
    method: Method,
    #[arg(long, default_value_t = default_tol())]
    tol: f64,
    /// Sweep limit; for the classical method, the rotation limit in units
    /// of n(n-1)/2.
    #[arg(long, default_value_t = DEFAULT_MAX_SWEEPS)]
    max_sweeps: usize,
    /// Low-precision eigensolver of the mixed method: `ql` or `jacobi`.
    #[arg(long, default_value = "ql", value_parser = parse_backend)]
    backend: LowPrecisionBackend,
    /// Also write a one-row CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// gen-matrix, solve, compare-classic-cyclic, compare-orthogonalizers,
    /// precondition-bound, sweep-counts or timing-improvement.
    experiment: Experiment,
    /// Matrix orders, comma separated. Defaults depend on the experiment.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_mode)]
    mode: Vec<Mode>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = default_tol())]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_SWEEPS)]
    max_sweeps: usize,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Use the large grids instead of the desk-scale defaults.
    #[arg(long)]
    full_scale: bool,
    /// Worker threads. Timings are only comparable with one worker per core.
    #[arg(long, env = THREADS_ENV, default_value_t = 1)]
    threads: usize,
    /// Timing repetitions per point; the fastest is reported.
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
    #[arg(long, default_value = "ql", value_parser = parse_backend)]
    backend: LowPrecisionBackend,
    /// Matrix file to solve instead of the generated grid (`solve` only).
    #[arg(long)]
    input: Option<PathBuf>,
}

fn gen_cmd(args: GenArgs) -> Result<()> {
    let spec = TestMatrixSpec::new(args.n, args.kappa, args.mode, args.seed)?;
    let a = generate(&spec)?;
    match args.out {
        Some(path) => {
            let f = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
            write_matrix(BufWriter::new(f), a.as_dense())?;
        }
        None => write_matrix(io::stdout().lock(), a.as_dense())?,
    }
    Ok(())
}

fn eig_cmd(args: EigArgs) -> Result<()> {
    let m = load_matrix(&args.path).with_context(|| format!("cannot read {}", args.path.display()))?;
    let a = SymMatrix::new(m).with_context(|| format!("invalid matrix in {}", args.path.display()))?;
    let report = eig(&a, args.method, args.tol, args.max_sweeps, args.backend)?;
    io::stdout().lock().write_all(report.render().as_bytes())?;
    if let Some(path) = args.out {
        let f = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        write_csv(BufWriter::new(f), &[report.to_row()])?;
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::new(args.experiment, args.out, args.full_scale);
    if !args.n.is_empty() {
        cfg.n_grid = args.n;
    }
    if !args.kappa.is_empty() {
        cfg.kappa_grid = args.kappa;
    }
    if !args.mode.is_empty() {
        cfg.modes = args.mode;
    }
    cfg.seed = args.seed;
    cfg.tol = args.tol;
    cfg.max_sweeps = args.max_sweeps;
    cfg.threads = args.threads;
    cfg.repeats = args.repeats;
    cfg.backend = args.backend;
    cfg.input = args.input;
    let summary = run(&cfg)?;
    eprintln!(
        "{}: {} rows written to {} ({} with errors)",
        cfg.experiment,
        summary.rows,
        cfg.output_path.display(),
        summary.failed_rows
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen_cmd(a),
        Command::Eig(a) => eig_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
