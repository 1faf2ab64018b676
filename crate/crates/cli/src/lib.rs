//! Library behind the `gpc` binary: scenario files, the run pipeline, CSV
//! and report output, and the reproduction suite.

// `!(x > 0)` style checks are deliberate: they also reject NaN. Index loops
// mirror the matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod report;
pub mod repro;

pub use commands::{execute, run_command, Command, Execution};
pub use config::Scenario;
pub use error::{CliError, Result};
pub use pipeline::{run, Outcome, Violation};
pub use repro::{run_suite, ReproCase, SuiteResult};

/// Sizes the global rayon pool from `GPC_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("GPC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("GPC_THREADS must be a positive integer, got {value:?}")))?;
    // A pool that already exists (tests, embedding) is left as is.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
