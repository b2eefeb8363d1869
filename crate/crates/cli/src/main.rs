//! Command-line front end: bounds, thresholds, verification suites and
//! self-normalized sums, with JSON or CSV output.

mod cmd_bound;
mod cmd_selfnorm;
mod cmd_thresholds;
mod cmd_verify;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use asymtail::FiniteDist;
use clap::{Parser, Subcommand};

use output::{CheckOutcome, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "asymtail",
    version,
    about = "Tail bounds for sums of bounded asymmetric random variables"
)]
struct Cli {
    /// Write a run manifest (command line, seed, version, wall time, checks) to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Combined tail bound for P(c_1 BS_1 + ... + c_n BS_n >= x).
    Bound(cmd_bound::BoundArgs),
    /// Threshold curves, constants and tables.
    Thresholds(cmd_thresholds::ThresholdArgs),
    /// Run verification suites.
    Verify(cmd_verify::VerifyArgs),
    /// Self-normalized sums: empirical tails versus bounds.
    Selfnorm(cmd_selfnorm::SelfNormArgs),
    /// Log-concave majorants of a tail function.
    Majorant(cmd_bound::MajorantArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(asymtail::Error),
    Runtime(String),
}

impl From<asymtail::Error> for CliError {
    fn from(e: asymtail::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Runtime(s) => write!(f, "error: {s}"),
        }
    }
}

/// Pass/fail outcomes reported by a command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub seed: Option<u64>,
    pub checks: Vec<CheckOutcome>,
}

pub fn read_dist(path: &Path) -> Result<FiniteDist, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn configure_threads() {
    if let Some(k) = std::env::var("ASYMTAIL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound::run_bound(a),
        Command::Thresholds(a) => cmd_thresholds::run(a),
        Command::Verify(a) => cmd_verify::run(a),
        Command::Selfnorm(a) => cmd_selfnorm::run(a),
        Command::Majorant(a) => cmd_bound::run_majorant(a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run 'asymtail --help' for the synopsis");
            }
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command_line: std::env::args().collect(),
            seed: outcome.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            checks: outcome.checks.clone(),
        };
        let text = match output::json(&m) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if outcome.checks.iter().all(|c| c.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
