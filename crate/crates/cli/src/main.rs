//! `qpcp`: singing voice separation and PCP recovery benchmarks.

mod bench;
mod config;
mod error;
mod evaluate;
mod io;
mod separate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use log::LevelFilter;

use crate::config::ConfigFile;
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "qpcp", version, about = "Robust PCA over real, complex and quaternion spectrograms")]
struct Cli {
    /// Flat key = value settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a mixture into voice and accompaniment stems.
    Separate(separate::SeparateArgs),
    /// Score separated stems against references.
    Evaluate(evaluate::EvaluateArgs),
    /// Synthetic low-rank plus sparse recovery benchmark.
    Bench(bench::BenchArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Separate(args) => separate::run(args, &file),
        Command::Evaluate(args) => evaluate::run(args, &file),
        Command::Bench(args) => bench::run(args, &file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(error::Status::Usage as u8),
            };
        }
    };
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpcp: {e}");
            e.exit_code()
        }
    }
}
