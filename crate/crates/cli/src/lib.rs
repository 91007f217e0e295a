//! Command-line driver for `casimir-core`: configuration, worker pool and
//! the data files written by each subcommand.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod executor;
pub mod output;

use std::io;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use executor::RayonExecutor;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input detected before any computation.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] casimir_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}
