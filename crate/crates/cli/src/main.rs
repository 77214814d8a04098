//! `lk-sharp`: sharp Landau-Kolmogorov constants on `[-1, 1]` from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Sharp constants, extremal functions and eigenfunction checks for
/// |f^(k)(t)| <= A‖f‖₂ + B‖f^(r)‖₂ on [-1, 1].
///
/// A point t = -1 or t = 1 selects the endpoint problem. Every run is
/// deterministic; set LK_SHARP_THREADS to bound parallelism (0 = automatic).
///
/// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure,
/// 4 selftest failure.
#[derive(Debug, Parser)]
#[command(name = "lk-sharp", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ω_t(δ) with λ(δ), the extremal function and the best recovery error.
    Omega(OmegaArgs),
    /// Points (λ, A, B) of the trade-off curve Γ_t.
    Gamma(GammaArgs),
    /// Stechkin's problem: E_N and the optimal functional.
    Stechkin(StechkinArgs),
    /// Markov-Nikolskii constants M_t of P_{r-1} in L2.
    Markov(MarkovArgs),
    /// Eigenvalues of (-1)^r D^(2r) with clamped ends.
    Eigen(EigenArgs),
    /// Does |φ_n^(r+k)| attain its maximum at the endpoints?
    Conjecture(ConjectureArgs),
    /// Run the oracle suite and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format; reals are printed as 17-significant-digit strings.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance for the reported residual checks.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Debug, Args)]
struct OrderArgs {
    /// Order r ≥ 1 of the constrained derivative.
    #[arg(long)]
    r: usize,
    /// Order 0 ≤ k ≤ r-1 of the objective derivative.
    #[arg(long, default_value_t = 0)]
    k: usize,
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Point t in [-1, 1].
    #[arg(long, allow_negative_numbers = true, conflicts_with = "t_grid")]
    t: Option<f64>,
    /// Uniform t grid `a:b:n` (n points from a to b inclusive).
    #[arg(long, allow_hyphen_values = true, value_parser = commands::parse_grid)]
    t_grid: Option<commands::Grid>,
}

#[derive(Debug, Args)]
struct OmegaArgs {
    #[command(flatten)]
    orders: OrderArgs,
    #[command(flatten)]
    points: PointArgs,
    /// δ ≥ 0.
    #[arg(long, conflicts_with = "delta_grid")]
    delta: Option<f64>,
    /// Logarithmic δ grid `a:b:n` with 0 < a ≤ b.
    #[arg(long, value_parser = commands::parse_grid)]
    delta_grid: Option<commands::Grid>,
    /// Maximize over t (r ∈ {1, 2}); t-grid size from --grid-size.
    #[arg(long)]
    uniform: bool,
    /// Chebyshev t grid size for --uniform.
    #[arg(long, default_value_t = 41)]
    grid_size: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GammaArgs {
    #[command(flatten)]
    orders: OrderArgs,
    #[command(flatten)]
    points: PointArgs,
    /// Comma-separated ascending λ ≥ 0.
    #[arg(long, default_value = "0,0.01,0.1,1,10,100,1000")]
    lambdas: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct StechkinArgs {
    #[command(flatten)]
    orders: OrderArgs,
    #[command(flatten)]
    points: PointArgs,
    /// Norm bound N of the approximating functional.
    #[arg(long = "N")]
    n: f64,
    /// Uniform-norm objective (r ∈ {1, 2}).
    #[arg(long)]
    uniform: bool,
    /// Chebyshev t grid size for --uniform diagnostics.
    #[arg(long, default_value_t = 41)]
    grid_size: usize,
    /// Write samples (x, u^(r)(x)) of the optimal functional's kernel as CSV.
    #[arg(long)]
    export_kernel: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MarkovArgs {
    #[command(flatten)]
    orders: OrderArgs,
    #[command(flatten)]
    points: PointArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EigenArgs {
    /// Order r ≥ 1.
    #[arg(long)]
    r: usize,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 10)]
    modes: usize,
    /// Galerkin dimension, at least 2·modes [default: 2·modes + 60].
    #[arg(long)]
    galerkin_dim: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ConjectureArgs {
    #[command(flatten)]
    orders: OrderArgs,
    /// Number of eigenfunctions to check.
    #[arg(long, default_value_t = 10)]
    modes: usize,
    /// Galerkin dimension, at least 2·modes [default: 2·modes + 60].
    #[arg(long)]
    galerkin_dim: Option<usize>,
    /// Uniform sample count on [-1, 1].
    #[arg(long, default_value_t = 2001)]
    samples: usize,
    /// Write samples of φ_n^(r+k), one column per mode, as CSV.
    #[arg(long)]
    export_figure: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Write the table to this file as well.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), commands::CliError> {
    let Ok(value) = std::env::var("LK_SHARP_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        commands::CliError::Usage(format!(
            "LK_SHARP_THREADS must be an integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::CliError::Usage(format!("cannot configure threads: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
