//! ergocycle: reproducible desk-scale experiments with rotation algebras,
//! matrix cocycles, and singular measures. Each subcommand is a thin adapter
//! over the library; reports are JSON, traces are CSV, and timing goes to
//! stderr so outputs stay byte-identical for a fixed (config, seed).

mod commands;
mod config;
mod report;

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// bad flags, config fields, or input documents; exit code 2
    Usage(String),
    /// a module precondition or numeric failure surfaced mid-run; exit code 1
    Module(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Module(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ergocycle",
    version,
    about = "Exact-arithmetic experiments: convergents, cocycle ergodicity, singular measures, equivalence deciders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction convergents as CSV (r,b_r,k_r,m_r,err,det_identity)
    Convergents(commands::convergents::Args),
    /// Birkhoff-average ergodicity probe for a matrix cocycle
    ErgodicityRun(commands::ergodicity::Args),
    /// Build the multiplier chart, cover bounds, and quasi-invariance report
    SingularBuild(commands::singular::Args),
    /// Decide a phase or relabeling equivalence from a JSON input document
    EquivDecide(commands::equiv::Args),
    /// Harmonic-series and interval lower bounds for finite-support elements
    L1Demo(commands::l1demo::Args),
    /// Trivialize random periodic and windowed unitary cocycles
    Trivialize(commands::trivialize::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (name, outcome) = match cli.command {
        Command::Convergents(a) => ("convergents", commands::convergents::run(a)),
        Command::ErgodicityRun(a) => ("ergodicity-run", commands::ergodicity::run(a)),
        Command::SingularBuild(a) => ("singular-build", commands::singular::run(a)),
        Command::EquivDecide(a) => ("equiv-decide", commands::equiv::run(a)),
        Command::L1Demo(a) => ("l1-demo", commands::l1demo::run(a)),
        Command::Trivialize(a) => ("trivialize", commands::trivialize::run(a)),
    };
    eprintln!("timing: {name} {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{name}: some verdicts failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{name}: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
