use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod gen;
mod instance;
mod manifest;
mod output;
mod solve;
mod trace;
mod verify;

use output::Format;

/// Minimum weight general cover: greedy and GSEMO solvers with oracle-backed
/// verification.
///
/// CSV columns are fixed per table and listed in each subcommand's help.
#[derive(Parser, Debug)]
#[command(name = "mingc", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Base seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (instance file for `gen`); tables go to stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest ground set the exact oracle will attempt
    #[arg(long, global = true, default_value_t = mingc::oracle::DEFAULT_CAP)]
    pub oracle_cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance.
    ///
    /// Table `solution`: instance, kind, algorithm, seed, iterations, status,
    /// cost, members, g, g_total, delta, opt, ratio, bound, within_bound.
    Solve(solve::SolveArgs),
    /// Run a self-check suite; exits 1 if any check fails.
    ///
    /// Table `verify`: suite, cap, cases, seed, checks, failures, status.
    /// Table `failures`: case, detail.
    Verify(verify::VerifyArgs),
    /// Run GSEMO with bin tracking and export both event streams.
    ///
    /// Table `run`: iteration, parent, flips, level, f1, f2, inserted,
    /// evicted, archive_size, min_level.
    /// Table `bintrack`: iteration, kind, bin, f1, f2, tracker, phase.
    /// Table `summary`: instance, seed, iterations, beta, opt, boundary,
    /// tracker, hitting_time, violations, dominator_choices.
    Trace(trace::TraceArgs),
    /// Hitting times and approximation ratios over random instance families.
    ///
    /// Table `bench`: family, size, trials, feasible, mean_hit, p95_hit,
    /// hit_bound, mean_ratio, max_ratio, theorem_bound, bound_violations,
    /// paper_bound, then sd_hit and sd_ratio when trials > 1.
    Bench(bench::BenchArgs),
    /// Generate a random instance file.
    Gen(gen::GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Gsemo,
}

/// How a command failed; maps onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable or invalid input (exit 2).
    Input(String),
    /// A checked invariant did not hold (exit 1).
    Invariant(String),
}

impl From<mingc::Error> for Failure {
    fn from(e: mingc::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve::run(&cli.global, a),
        Command::Verify(a) => verify::run(&cli.global, a),
        Command::Trace(a) => trace::run(&cli.global, a),
        Command::Bench(a) => bench::run(&cli.global, a),
        Command::Gen(a) => gen::run(&cli.global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
