//! Command-line front end for `dirmono-core`.
//!
//! `dirmono check` resolves a [`RunConfig`] from flags and an optional JSON
//! config file, scans the requested directions and writes a [`Report`] as
//! text, JSON or CSV. Exit codes: 0 when every requested direction passes,
//! 1 when any is refuted or unsupported, 2 on usage, config or I/O errors,
//! 3 when the inequality and oracle routes disagree.

pub mod config;
pub mod report;

use std::fs;
use std::io::Write;
use std::time::Instant;

use dirmono_core::scan_directions;

pub use config::{parse_config, CheckArgs, Cli, Command, Format, RunConfig};
pub use report::{format_report, Report, SCHEMA_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Spec(#[from] dirmono_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Runs the scan described by `config` without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    let started = Instant::now();
    let scan = scan_directions(
        &config.spec,
        &config.resolved_directions(),
        config.grid,
        config.method,
        &config.options(),
    )?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        verdicts: scan.verdicts,
        disagreements: scan.disagreements,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn exit_code(report: &Report) -> i32 {
    if report.defects().next().is_some() {
        EXIT_DISAGREEMENT
    } else if report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_REFUTED
    }
}

/// Executes, writes the report to `config.out` or standard output, and
/// returns the exit code.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    let report = execute(config)?;
    let body = format_report(&report, config.format)?;
    match &config.out {
        Some(path) => fs::write(path, body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(exit_code(&report))
}
