//! Batch experiment driver for nested coset codes on type II wiretap
//! channels. Every command produces a [`Report`]: CSV rows under a commented
//! `key=value` header, optionally mirrored to a JSON sidecar.

pub mod commands;
pub mod config;
mod error;
pub mod report;

pub use config::{Cli, Command, CommandKind, ExperimentConfig};
pub use error::CliError;
pub use report::Report;

/// Runs one command on a resolved configuration.
pub fn execute(kind: CommandKind, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match kind {
        CommandKind::Capacity => commands::cmd_capacity(cfg),
        CommandKind::Threshold => commands::cmd_threshold(cfg),
        CommandKind::Simulate => commands::cmd_simulate(cfg),
        CommandKind::Region => commands::cmd_region(cfg),
        CommandKind::CompareBsc => commands::cmd_compare_bsc(cfg).map(|(r, _)| r),
    }
}

/// Resolves flags and config file, runs the command and writes its outputs.
pub fn run(command: Command) -> Result<(), CliError> {
    let (kind, args) = command.split();
    let cfg = ExperimentConfig::resolve(kind, args)?;
    let (report, ok) = match kind {
        CommandKind::CompareBsc => commands::cmd_compare_bsc(&cfg)?,
        _ => (execute(kind, &cfg)?, true),
    };
    report.emit(cfg.out.as_deref(), cfg.json.as_deref())?;
    if !ok {
        return Err(CliError::Numeric("2q >= -log2(1-q) or 2q <= h(q) failed on some grid point".into()));
    }
    Ok(())
}
