//! Batch front end for the `eit-core` library: TOML configuration, spectrum
//! CSV ingestion, JSON run reports and the `eitbench` subcommands.

// NaN must fail validity checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod spectrum_io;

pub use cli::{run, Cli, Command, ModelChoice};
pub use config::{ConfigError, WorkbenchConfig};
pub use error::WorkbenchError;
