//! Config-driven front end for the `mmwave-lab` binary.
//!
//! Exit codes: 0 success, 1 output write failure, 2 bad config or usage,
//! 3 spectra not covering a requested frequency, 4 numerical failure.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod output;

pub use commands::{run, Cli, Command};
pub use error::{CliError, CliResult};
