//! Command-line drivers for the splitwave schemes: single runs, dispersion
//! curves, convergence sweeps, and conservation tables, all emitted as CSV.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_conserve, cmd_convergence, cmd_dispersion, cmd_run, conserve_run, convergence_sweep,
    field_errors, resolve_dt, run_simulation, sweep_rates, ConserveRow, ConvergenceRow,
};
pub use config::{DtChoice, RunConfig, OUT_DIR_ENV, PAPER_DT};

use thiserror::Error;

/// Driver errors; the binary maps them onto exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration file or option value (exit code 2).
    #[error("config error: {0}")]
    Config(String),

    /// Solver-side failure; divergence maps to exit code 3.
    #[error(transparent)]
    Solver(#[from] splitwave::Error),

    /// Output could not be written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit code the binary reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(splitwave::Error::Diverged { .. }) => 3,
            // a refused step means the configured dt was too large
            CliError::Solver(splitwave::Error::CflExceeded { .. }) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}
