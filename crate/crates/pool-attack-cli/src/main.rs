//! Command-line front end for the pool-attack laboratory.
//!
//! Subcommands: `eval` (closed-form point evaluation), `optimize`
//! (multi-start maximization, single point or grid sweep), `simulate`
//! (Monte Carlo cycle estimates or difficulty-epoch timelines), and
//! `figures` (CSV reproduction of the headline figure data).
//!
//! All output is CSV with a `# key = value` header carrying the fully
//! resolved configuration. Exit codes: 0 success, 2 validation error,
//! 3 internal numeric or I/O failure.

mod cmd_eval;
mod cmd_figures;
mod cmd_optimize;
mod cmd_simulate;
mod config;
mod output;
mod point;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exit classification for error reporting.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or configuration (exit 2).
    Validation(String),
    /// Internal numeric or I/O failure (exit 3).
    Internal(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}

impl From<pool_attack::Error> for CliError {
    fn from(e: pool_attack::Error) -> Self {
        // Every library error names a violated input contract.
        CliError::Validation(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "pool-attack",
    version,
    about = "Closed forms, Monte Carlo checks, and optimization for \
             power-adjusting block-withholding attacks on mining pools",
    after_help = "Exit codes: 0 success, 2 validation error, 3 internal failure."
)]
struct Cli {
    /// Plain-text `key = value` config file; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed for every stochastic or multi-start component.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output CSV file (or directory for `figures`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for sweeps and simulation (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed forms at one parameter point.
    Eval(cmd_eval::EvalArgs),
    /// Maximize an attack objective at a point or over an (alpha, beta) grid.
    Optimize(cmd_optimize::OptimizeArgs),
    /// Run the Monte Carlo cycle estimator or the difficulty-epoch timeline.
    Simulate(cmd_simulate::SimulateArgs),
    /// Reproduce the figure datasets as a set of CSV files.
    Figures(cmd_figures::FiguresArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::validation("workers must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
    }
    let mut settings = config::Settings::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        settings.record("seed", seed);
    }
    match cli.command {
        Command::Eval(args) => cmd_eval::run(args, cli.seed, cli.out.as_deref(), &mut settings),
        Command::Optimize(args) => {
            cmd_optimize::run(args, cli.seed, cli.out.as_deref(), &mut settings)
        }
        Command::Simulate(args) => {
            cmd_simulate::run(args, cli.seed, cli.out.as_deref(), &mut settings)
        }
        Command::Figures(args) => {
            cmd_figures::run(args, cli.seed, cli.out.as_deref(), &mut settings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
