mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use wpb_core::bounds::EPS2;
use wpb_core::certify::DEFAULT_DEPTH;
use wpb_core::harness::{DEFAULT_MODES, DEFAULT_POINTS};
use wpb_core::Execution;

/// Certified bounds for quadratic differentials on collars and cusps, and
/// the Weil-Petersson curvature bounds built on them.
///
/// Exit codes: 0 all checks pass, 1 a violation, 2 usage error,
/// 3 inconclusive. WPB_THREADS caps the worker pool.
#[derive(Parser, Debug)]
#[command(name = "wpb", version)]
struct Cli {
    /// Run every suite on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute the printed constants and compare within a tolerance.
    Constants(ConstantsArgs),
    /// Run certification checks by id.
    Certify(CertifyArgs),
    /// Seeded random differentials against every pointwise inequality.
    VerifyRandom(VerifyArgs),
    /// CSV samples of the bound functions on a log-spaced grid.
    Plotdata(PlotArgs),
    /// CSV sweep of the extremal ratio across a collar.
    Sharpness(SharpnessArgs),
    /// Curvature bounds for a genus, puncture count and systole.
    Curvature(CurvatureArgs),
    /// The systole threshold delta(eps) of the asymptotic pointwise bound.
    Delta(DeltaArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 5e-5)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Check ids, comma separated or repeated, or `all`.
    #[arg(long = "check", value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    #[arg(long, default_value_t = wpb_core::certify::R_MIN)]
    rmin: f64,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    /// List the known check ids and exit.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Mode cutoff: collar modes run over -N..=N, cusp modes over 1..=N.
    #[arg(long, default_value_t = DEFAULT_MODES)]
    modes: u32,
    #[arg(long = "Lmin", alias = "lmin", default_value_t = 0.01)]
    l_min: f64,
    #[arg(long = "Lmax", alias = "lmax", default_value_t = 2.0 * EPS2)]
    l_max: f64,
    /// Sample points per trial and domain.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long, value_delimiter = ',', default_value = "H,sqrtRC,twoF,C")]
    functions: Vec<String>,
    #[arg(long, default_value_t = wpb_core::export::DEFAULT_PLOT_RMIN)]
    rmin: f64,
    #[arg(long, default_value_t = wpb_core::export::DEFAULT_PLOT_RMAX)]
    rmax: f64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstraintArg {
    All,
    Perp,
}

#[derive(Args, Debug)]
struct SharpnessArgs {
    /// Core geodesic length, at most 2 eps2.
    #[arg(long = "L", alias = "length")]
    length: f64,
    #[arg(long, default_value_t = 64)]
    modes: u32,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, value_enum, default_value_t = ConstraintArg::All)]
    constraint: ConstraintArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    punctures: u32,
    #[arg(long)]
    systole: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct DeltaArgs {
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-4,1e-5")]
    eps: Vec<f64>,
    #[command(flatten)]
    out: Output,
}

fn configure_threads() -> Result<(), commands::CliError> {
    match std::env::var("WPB_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| commands::CliError::Usage(format!("WPB_THREADS must be a positive integer, got `{v}`")))?;
            wpb_core::exec::set_max_threads(n);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let result = configure_threads().and_then(|()| commands::run(cli.command, exec));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("wpb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
