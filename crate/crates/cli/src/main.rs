use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpc_cli::{configure_threads, repro, run_command, CliError, Command};

#[derive(Debug, Parser)]
#[command(name = "gpc", version, about = "Generalized Pauli channel dynamics: propagate, certify, project")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Propagate the dynamics and write trajectory.csv and report.txt.
    Propagate(Io),
    /// Certify the dynamics and write report.txt.
    Certify(Io),
    /// Write classical stochastic maps (and qubit phase-space maps).
    Classical(Io),
    /// Run the reproduction suite.
    Repro {
        /// Fixture directory; defaults to the fixtures shipped with the crate.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, default_value = "repro-out")]
        out: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct Io {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    let (command, io) = match cli.command {
        Cmd::Propagate(io) => (Command::Propagate, io),
        Cmd::Certify(io) => (Command::Certify, io),
        Cmd::Classical(io) => (Command::Classical, io),
        Cmd::Repro { fixtures, out } => {
            let fixtures = fixtures.unwrap_or_else(repro::default_fixture_dir);
            return match repro::run_suite(&fixtures, Some(&out)) {
                Ok(suite) => {
                    print!("{}", suite.table());
                    println!("results: {}", out.join("results.json").display());
                    ExitCode::from(if suite.passed() { 0 } else { 1 })
                }
                Err(e) => fail(e),
            };
        }
    };
    match run_command(command, &io.config, &io.out) {
        Ok(execution) => {
            print!("{}", execution.report);
            ExitCode::from(execution.exit_code() as u8)
        }
        Err(e) => fail(e),
    }
}
