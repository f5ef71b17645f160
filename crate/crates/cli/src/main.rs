//! `invopt` — experiment harness for online inverse linear optimization.
//!
//! Subcommands: `run` (configured experiment → trace CSVs), `lowerbound`
//! (Monte Carlo first-rounds regret on the adversarial instance),
//! `arc2d-bench` (planar arc learner against its constant expected-regret
//! bound), `sweep` (cross-product cells → summary CSV), and `plot` (regret
//! curves → static SVG).
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage/config errors.
//! `INVOPT_OUT_DIR` overrides the output directory unless `--out-dir` is
//! given.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "invopt",
    version,
    about = "Experiment harness for online inverse linear optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file (one trace per seed).
    Run {
        /// Path to the experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Monte Carlo mean of the regret over the first n rounds on the
    /// adversarial axis-segment instance, against the Bn/4 threshold.
    Lowerbound {
        /// Ambient dimension n.
        #[arg(long)]
        dim: usize,
        /// Interaction bound B of the construction.
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        /// Horizon (defaults to n; must be ≥ n).
        #[arg(long)]
        horizon: Option<usize>,
        /// Number of Monte Carlo trials (≥ 30).
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Learner: ons | metagrad | ogd (arc2d allowed when n = 2).
        #[arg(long, default_value = "ons")]
        learner: String,
        /// Base seed; trial i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Monte Carlo benchmark of the planar arc learner on random segment or
    /// polygon instances in the half-unit disk.
    Arc2dBench {
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        /// Number of Monte Carlo trials (≥ 30).
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Instance kind: segments | polygons.
        #[arg(long, default_value = "segments")]
        generator: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run every (dim, horizon, learner, agent, seed) cell of a sweep config
    /// in parallel and write one summary CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Render cumulative regret curves from trace CSVs into an SVG.
    Plot {
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Trace CSV files produced by `run`.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
}

/// A failure with its process exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

/// Errors surfaced while interpreting inputs are usage errors (exit 2);
/// anything after a validated start is a runtime failure (exit 1).
pub fn usage(err: invopt_core::Error) -> Failure {
    Failure::usage(err.to_string())
}

pub fn runtime(err: invopt_core::Error) -> Failure {
    Failure::runtime(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out_dir } => commands::run(&config, out_dir),
        Command::Lowerbound {
            dim,
            bound,
            horizon,
            trials,
            learner,
            seed,
            out_dir,
        } => commands::lowerbound(dim, bound, horizon, trials, &learner, seed, out_dir),
        Command::Arc2dBench {
            horizon,
            trials,
            generator,
            seed,
            out_dir,
        } => commands::arc2d_bench(horizon, trials, &generator, seed, out_dir),
        Command::Sweep { config, out_dir } => commands::sweep(&config, out_dir),
        Command::Plot { out, traces } => commands::plot(&out, &traces),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
