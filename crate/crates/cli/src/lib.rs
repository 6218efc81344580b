//! Experiment runner behind the `sccp` binary: JSON configs in, reports out.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod presets;
pub mod report;

use std::time::Instant;

pub use config::ExperimentConfig;
pub use report::Report;

use config::Command;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

/// Runs a validated config and assembles its report.
pub fn run(config: &ExperimentConfig) -> Result<Report, CliError> {
    config.validate()?;
    let start = Instant::now();
    let (table, summary) = match &config.command {
        Command::Section { directions, levels } => commands::cmd_section(config, directions, levels),
        Command::Sccp { directions, n_levels } => commands::cmd_sccp(config, directions, *n_levels),
        Command::Cutvol(task) => commands::cmd_cutvol(config, task)?,
        Command::Asym { radii } => commands::cmd_asym(config, radii),
    };
    Ok(Report::new(config.clone(), table, summary, start.elapsed().as_secs_f64()))
}
