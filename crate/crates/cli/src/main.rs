//! Command-line driver: evaluate entanglement criteria on limiting spectral
//! laws, tabulate free-convolution densities, and run finite-size
//! simulations against the predictions.
//!
//! Measures are described by JSON files using the serialized form of
//! `MeasureExpr`, for example `{"type":"marchenko_pastur","c":5.0}` or
//! `{"type":"atomic","atoms":[[0.0,0.5],[1.0,0.5]]}`. All outputs are
//! deterministic: the same inputs and seeds produce byte-identical files.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freespec_core::criteria::{
    depolarizing_minus_choi, depolarizing_plus_choi, sk_norm_limit, DEFAULT_GROUP_TOL,
};
use freespec_core::linalg::Complex64;
use freespec_core::rmt::histogram;
use freespec_core::{
    apply_block_map, check_unitarity, density, estimate_s1_norm, evaluate_all, partial_transpose,
    sample_invariant, schmidt_feasibility, set_blas_threads, support_edges, BipartiteMatrix,
    CMatrix, ConvError, CriteriaError, MeasureError, MeasureExpr, RmtError, SupportKind,
};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path} is not a valid measure file: {source}")]
    MeasureFile { path: String, source: serde_json::Error },
    #[error("{path} is not a valid choi file: {source}")]
    ChoiFile { path: String, source: serde_json::Error },
    #[error("{0}")]
    Flag(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Conv(#[from] ConvError),
    #[error(transparent)]
    Rmt(#[from] RmtError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Parser)]
#[command(
    name = "freespec",
    version,
    about = "Limiting spectral laws of block-modified random matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every positivity, separability and entanglement criterion
    /// for a measure at block dimension n and write the report as JSON.
    Analyze(AnalyzeArgs),
    /// Tabulate the density of a free convolution power over its support
    /// and write it as CSV.
    Convolve(ConvolveArgs),
    /// Sample block matrices with the prescribed spectral law, apply a
    /// block map, and write eigenvalue histogram and extremes CSVs.
    Simulate(SimulateArgs),
    /// Report the largest certifiable Schmidt number and the witness
    /// parameters for block dimension n.
    Schmidt(SchmidtArgs),
    /// Report the limiting S(k) norm of a state profile, optionally checked
    /// against a finite-size estimate for k = 1.
    Sknorm(SknormArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Measure JSON file.
    #[arg(long)]
    measure: String,
    /// Block dimension.
    #[arg(long)]
    n: usize,
    /// Schmidt ranks for the S(k) norm table, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ConvolveArgs {
    /// Measure JSON file.
    #[arg(long)]
    measure: String,
    /// Free convolution power T >= 1.
    #[arg(long)]
    power: f64,
    /// Number of grid points across the support.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// Measure JSON file for the input spectral law.
    #[arg(long)]
    measure: String,
    /// Block dimension.
    #[arg(long)]
    n: usize,
    /// Environment dimension; matrices are (n*d) x (n*d).
    #[arg(long)]
    d: usize,
    /// Number of independent trials.
    #[arg(long)]
    trials: usize,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Block map: gamma, delta_plus, delta_minus, or choi:<file>.
    #[arg(long)]
    map: String,
    /// Output prefix; writes <prefix>_hist.csv and <prefix>_extremes.csv.
    #[arg(long)]
    out_prefix: String,
    /// Number of histogram bins.
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Worker threads for trials; defaults to the machine parallelism.
    /// The FREESPEC_JOBS environment variable overrides this flag.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SchmidtArgs {
    /// Block dimension.
    #[arg(long)]
    n: usize,
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct SknormArgs {
    /// Measure JSON file.
    #[arg(long)]
    measure: String,
    /// Block dimension.
    #[arg(long)]
    n: usize,
    /// Schmidt rank 1 <= k <= n.
    #[arg(long)]
    k: usize,
    /// Also run the finite-size estimator (k = 1 only).
    #[arg(long)]
    verify: bool,
    /// Environment dimension for --verify.
    #[arg(long, default_value_t = 400)]
    d: usize,
    /// Restarts for --verify.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Alternating iterations per restart for --verify.
    #[arg(long, default_value_t = 60)]
    iters: usize,
    /// Seed for --verify.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Convolve(args) => cmd_convolve(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Schmidt(args) => cmd_schmidt(args),
        Command::Sknorm(args) => cmd_sknorm(args),
    }
}

fn read_measure(path: &str) -> Result<MeasureExpr, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })?;
    let measure: MeasureExpr =
        serde_json::from_str(&text).map_err(|source| CliError::MeasureFile {
            path: path.to_string(),
            source,
        })?;
    Ok(measure.validated()?)
}

fn write_out(path: &str, content: &str) -> Result<(), CliError> {
    if path == "-" {
        std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|source| CliError::Write { path: path.to_string(), source })
    } else {
        fs::write(path, content).map_err(|source| CliError::Write {
            path: path.to_string(),
            source,
        })
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, CliError> {
    let measure = read_measure(&args.measure)?;
    if args.k.is_empty() {
        return Err(CliError::Flag("--k needs at least one rank".into()));
    }
    let report = evaluate_all(&measure, args.n, &args.k)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_out(&args.out, &text)?;
    Ok(if report.all_inconclusive() { 2 } else { 0 })
}

fn cmd_convolve(args: ConvolveArgs) -> Result<u8, CliError> {
    if args.grid < 2 {
        return Err(CliError::Flag(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    let measure = read_measure(&args.measure)?;
    let edges = support_edges(&measure, args.power)?;
    let step = edges.width() / (args.grid - 1) as f64;
    let xs: Vec<f64> = (0..args.grid).map(|i| edges.lo + step * i as f64).collect();
    let profile = density(&measure, args.power, &xs)?;

    let kind = match edges.kind {
        SupportKind::Exact => "exact",
        SupportKind::OuterBound => "outer_bound",
        SupportKind::MonteCarlo => "monte_carlo",
    };
    let mut out = format!("# support,{},{},{kind}\n", fmt(edges.lo), fmt(edges.hi));
    for &(x, mass) in &profile.atoms {
        out.push_str(&format!("# atom,{},{}\n", fmt(x), fmt(mass)));
    }
    out.push_str("x,pdf\n");
    for &(x, pdf) in &profile.points {
        out.push_str(&format!("{},{}\n", fmt(x), fmt(pdf)));
    }
    write_out(&args.out, &out)?;
    Ok(0)
}

enum BlockMap {
    Gamma,
    Choi(CMatrix),
}

#[derive(Deserialize)]
struct ChoiFile {
    n: usize,
    matrix_re: Vec<Vec<f64>>,
    matrix_im: Vec<Vec<f64>>,
}

fn load_choi(path: &str, n: usize) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })?;
    let file: ChoiFile = serde_json::from_str(&text).map_err(|source| CliError::ChoiFile {
        path: path.to_string(),
        source,
    })?;
    if file.n != n {
        return Err(CliError::Flag(format!(
            "choi file is for n = {}, but --n is {n}",
            file.n
        )));
    }
    let dim = n * n;
    let shape_ok = |m: &Vec<Vec<f64>>| m.len() == dim && m.iter().all(|row| row.len() == dim);
    if !shape_ok(&file.matrix_re) || !shape_ok(&file.matrix_im) {
        return Err(CliError::Flag(format!(
            "choi matrix entries must form a {dim}x{dim} array"
        )));
    }
    let choi = CMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(file.matrix_re[i][j], file.matrix_im[i][j])
    });
    check_unitarity(&choi, n, DEFAULT_GROUP_TOL)?;
    Ok(choi)
}

fn parse_map(spec: &str, n: usize) -> Result<BlockMap, CliError> {
    match spec {
        "gamma" => Ok(BlockMap::Gamma),
        "delta_plus" => Ok(BlockMap::Choi(depolarizing_plus_choi(n))),
        "delta_minus" => Ok(BlockMap::Choi(depolarizing_minus_choi(n))),
        other => match other.strip_prefix("choi:") {
            Some(path) => Ok(BlockMap::Choi(load_choi(path, n)?)),
            None => Err(CliError::Flag(format!(
                "--map must be gamma, delta_plus, delta_minus or choi:<file>, got {other}"
            ))),
        },
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8, CliError> {
    if args.trials == 0 {
        return Err(CliError::Flag("--trials must be positive".into()));
    }
    if args.n < 2 {
        return Err(CliError::Flag(format!("--n must be at least 2, got {}", args.n)));
    }
    if args.d == 0 {
        return Err(CliError::Flag("--d must be positive".into()));
    }
    let measure = read_measure(&args.measure)?;
    let map = parse_map(&args.map, args.n)?;
    let jobs = match std::env::var("FREESPEC_JOBS") {
        Ok(value) => value.parse::<usize>().map_err(|_| {
            CliError::Flag(format!("FREESPEC_JOBS must be a thread count, got {value}"))
        })?,
        Err(_) => args.jobs.unwrap_or(0),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|err| CliError::Flag(format!("cannot build thread pool: {err}")))?;

    // Trials run in parallel, so the eigensolver must not spawn its own
    // threads underneath them.
    set_blas_threads(1);
    let trials: Result<Vec<(u64, Vec<f64>)>, CliError> = pool.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|i| {
                let trial_seed = args.seed.wrapping_add(i as u64);
                let sample = sample_invariant(&measure, args.n * args.d, trial_seed)?;
                let x = BipartiteMatrix::new(args.n, args.d, sample)?;
                let mapped = match &map {
                    BlockMap::Gamma => partial_transpose(&x),
                    BlockMap::Choi(choi) => apply_block_map(&x, choi)?,
                };
                Ok((trial_seed, mapped.eigvals()?))
            })
            .collect()
    });
    let trials = trials?;

    let mut extremes = String::from("seed,lambda_min,lambda_max\n");
    let mut all = Vec::with_capacity(args.trials * args.n * args.d);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (trial_seed, eigs) in &trials {
        let (min, max) = (eigs[0], eigs[eigs.len() - 1]);
        extremes.push_str(&format!("{trial_seed},{},{}\n", fmt(min), fmt(max)));
        lo = lo.min(min);
        hi = hi.max(max);
        all.extend_from_slice(eigs);
    }
    let mut hist = String::from("bin_left,bin_right,count\n");
    for (left, right, count) in histogram(&all, lo, hi, args.bins)? {
        hist.push_str(&format!("{},{},{count}\n", fmt(left), fmt(right)));
    }

    write_out(&format!("{}_hist.csv", args.out_prefix), &hist)?;
    write_out(&format!("{}_extremes.csv", args.out_prefix), &extremes)?;
    Ok(0)
}

fn cmd_schmidt(args: SchmidtArgs) -> Result<u8, CliError> {
    let cert = schmidt_feasibility(args.n)?;
    let mut text = serde_json::to_string_pretty(&cert)?;
    text.push('\n');
    write_out(&args.out, &text)?;
    Ok(0)
}

fn cmd_sknorm(args: SknormArgs) -> Result<u8, CliError> {
    let measure = read_measure(&args.measure)?;
    let limit = sk_norm_limit(&measure, args.n, args.k)?;
    let mut value = serde_json::json!({
        "n": args.n,
        "k": args.k,
        "limit": limit,
    });
    if args.verify {
        if args.k != 1 {
            return Err(CliError::Flag(format!(
                "--verify estimates the S(1) norm only, got --k {}",
                args.k
            )));
        }
        let sample = sample_invariant(&measure, args.n * args.d, args.seed)?;
        let x = BipartiteMatrix::new(args.n, args.d, sample)?;
        let estimate = estimate_s1_norm(&x, args.restarts, args.iters, args.seed)?;
        value["estimate"] = serde_json::json!(estimate);
        value["d"] = serde_json::json!(args.d);
        value["restarts"] = serde_json::json!(args.restarts);
        value["iters"] = serde_json::json!(args.iters);
        value["seed"] = serde_json::json!(args.seed);
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    write_out(&args.out, &text)?;
    Ok(0)
}
