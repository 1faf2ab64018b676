//! The `propagate`, `certify` and `classical` commands.

use std::path::{Path, PathBuf};

use crate::config::{OutputKind, Scenario};
use crate::error::{CliError, Result};
use crate::output::{classical_table, trajectory_table, wigner_table};
use crate::pipeline::{run, Outcome};
use crate::report::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Propagate,
    Certify,
    Classical,
}

/// Finished command: the outcome plus every file to write, in order.
#[derive(Debug, Clone)]
pub struct Execution {
    pub outcome: Outcome,
    pub report: String,
    pub files: Vec<(String, String)>,
}

impl Execution {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    /// Writes every file into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
        self.files
            .iter()
            .map(|(name, contents)| {
                let path = dir.join(name);
                std::fs::write(&path, contents).map_err(|source| CliError::Write { path: path.clone(), source })?;
                Ok(path)
            })
            .collect()
    }
}

/// Runs a command entirely in memory.
pub fn execute(command: Command, scenario: &Scenario) -> Result<Execution> {
    let outcome = run(scenario)?;
    let report = render(&outcome);
    let mut files = Vec::new();
    match command {
        Command::Propagate => {
            let table = trajectory_table(
                &outcome,
                scenario.wants(OutputKind::Gamma),
                scenario.wants(OutputKind::Classical),
                scenario.wants(OutputKind::Wigner),
            )?;
            files.push(("trajectory.csv".to_string(), table.to_csv()));
        }
        Command::Certify => {}
        Command::Classical => {
            files.push(("classical.csv".to_string(), classical_table(&outcome)?.to_csv()));
            if scenario.d == 2 {
                files.push(("wigner.csv".to_string(), wigner_table(&outcome)?.to_csv()));
            }
        }
    }
    files.push(("report.txt".to_string(), report.clone()));
    Ok(Execution { outcome, report, files })
}

/// Loads, executes and writes; returns the process exit code on success.
pub fn run_command(command: Command, config: &Path, out: &Path) -> Result<Execution> {
    let scenario = Scenario::load(config)?;
    let execution = execute(command, &scenario)?;
    execution.write(out)?;
    Ok(execution)
}
