//! `rmlab`: runs Reed-Muller experiments and writes CSV or JSON results.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "rmlab", version, about = "Reed-Muller code experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Master seed; required by the randomized subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "RMLAB_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact weight distribution of RM(m, r).
    WeightProfile(commands::WeightProfileArgs),
    /// Monte Carlo frequency of |bias| > ε over random codewords.
    BiasTail(commands::BiasTailArgs),
    /// Evaluated upper and lower bounds on the weight distribution.
    Bounds(commands::BoundsArgs),
    /// Bias of random polynomials from the structured lower-bound family.
    LowerBoundSample(commands::LowerBoundSampleArgs),
    /// Majority-of-derivatives approximation of a polynomial.
    Approx(commands::ApproxArgs),
    /// Failure rate on an erasure or error channel.
    Simulate(commands::SimulateArgs),
    /// Failure rate over a grid of capacity multiples.
    Sweep(commands::SweepArgs),
    /// Evaluate the inequality families behind the capacity thresholds.
    CheckCapacityConstraints(commands::ConstraintArgs),
    /// Binomial sums, entropy and parameter solvers.
    Combinatorics(commands::CombinatoricsArgs),
}

impl Command {
    fn run(&self, seed: Option<u64>) -> rmlab::Result<Report> {
        match self {
            Command::WeightProfile(a) => commands::weight_profile(a),
            Command::BiasTail(a) => commands::bias_tail(a, seed),
            Command::Bounds(a) => commands::bounds(a),
            Command::LowerBoundSample(a) => commands::lower_bound_sample(a, seed),
            Command::Approx(a) => commands::approx(a, seed),
            Command::Simulate(a) => commands::simulate(a, seed),
            Command::Sweep(a) => commands::sweep(a, seed),
            Command::CheckCapacityConstraints(a) => commands::check_constraints(a),
            Command::Combinatorics(a) => commands::combinatorics(a),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_PRECONDITION;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_INTERNAL;
        }
    };
    let report = match pool.install(|| cli.command.run(cli.common.seed)) {
        Ok(mut r) => {
            r.config.insert("seed".into(), cli.common.seed.into());
            r
        }
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_caller_error() {
                EXIT_PRECONDITION
            } else {
                EXIT_INTERNAL
            };
        }
    };
    let text = report.render(cli.common.format);
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush())
        }
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_INTERNAL
        }
    }
}
