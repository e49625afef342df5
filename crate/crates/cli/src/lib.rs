//! Experiment harness for partially transposed Wishart spectra.
//!
//! [`run`] executes an [`ExperimentConfig`] and returns a [`Report`], which
//! serializes to JSON or to one CSV row per (trial, statistic). Trials run in
//! parallel, one [`ptw_core::SampleStream`] each, and are merged in stream
//! order, so a report depends only on its configuration.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod report;
pub mod selftest;
pub mod stats;
pub mod tables;
pub mod thresholds;

use std::time::Instant;

pub use config::{
    ExperimentConfig, GridPoint, OutputFormat, PureMethod, RunOptions, Subcommand, UsageError,
};
pub use report::{Check, Report, Scale};

/// Exit codes of the `ptw` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const SELFTEST_FAILED: i32 = 2;
    pub const THRESHOLD_MISS: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Core(#[from] ptw_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Validates `config` and runs the selected experiment.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<Report, RunError> {
    let grid = config.validate()?;
    let start = Instant::now();
    let mut report = match config.subcommand {
        Subcommand::Spectrum => experiments::run_spectrum(config, &grid, opts)?,
        Subcommand::Extremes => experiments::run_extremes(config, &grid, opts)?,
        Subcommand::Ppt => experiments::run_ppt_sweep(config, &grid, opts)?,
        Subcommand::Pure => experiments::run_pure_state(config, &grid, opts)?,
        Subcommand::Selftest => {
            let mut r = Report::new(config.clone(), Scale::None);
            r.checks = selftest::selftest_checks()?;
            r
        }
        Subcommand::Laws => {
            let mut r = Report::new(config.clone(), Scale::None);
            r.tables = tables::law_tables(grid[0].alpha, config.bins)?;
            r
        }
    };
    if opts.timing {
        report.provenance.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Exit code for a finished run.
pub fn exit_code(report: &Report, opts: &RunOptions) -> i32 {
    match report.config.subcommand {
        Subcommand::Selftest if !report.all_checks_pass() => exit::SELFTEST_FAILED,
        _ if opts.check && !report.all_checks_pass() => exit::THRESHOLD_MISS,
        _ => exit::OK,
    }
}

/// Serializes `report` in the configured format.
pub fn render(report: &Report) -> String {
    match report.config.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    }
}
