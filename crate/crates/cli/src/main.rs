//! `paircorr`: pair-distance distributions of lattice point sets from the
//! command line.

mod args;
mod checks;
mod mc;
mod output;
mod pairs;
mod points;
mod theory;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Pair-distance distribution of equidistributed point sets.
#[derive(Debug, Parser)]
#[command(name = "paircorr", version, about)]
struct Cli {
    /// Worker threads (0 = one per core). Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the theoretical density and distribution function.
    Theory(theory::TheoryArgs),
    /// Histogram of pair distances in a lattice point set, with a goodness-of-fit report.
    Pairs(pairs::PairsArgs),
    /// List the points of a lattice point set.
    Points(points::PointsArgs),
    /// Equidistribution and volume-heuristic checks.
    Checks(checks::ChecksArgs),
    /// Monte Carlo estimates of the analytic volumes.
    Mc(mc::McArgs),
}

/// Whether every embedded pass criterion held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Theory(a) => theory::run(a),
        Command::Pairs(a) => pairs::run(a),
        Command::Points(a) => points::run(a),
        Command::Checks(a) => checks::run(a),
        Command::Mc(a) => mc::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(anyhow::Error::from)
        .and_then(|pool| pool.install(|| run(cli.command)));
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
