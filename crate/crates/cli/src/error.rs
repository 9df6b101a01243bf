use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: mmwave_lab::Error,
    },
    #[error(transparent)]
    Core(#[from] mmwave_lab::Error),
    #[error("writing {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OUTPUT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RANGE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

fn core_exit_code(e: &mmwave_lab::Error) -> i32 {
    match e {
        mmwave_lab::Error::Range { .. } => EXIT_RANGE,
        mmwave_lab::Error::Numerical { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

impl CliError {
    /// 2 for bad configuration or usage, 3 for data that does not cover the
    /// requested frequencies, 4 for numerical failures, 1 for output I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config { .. } => EXIT_CONFIG,
            Self::Input { source, .. } => core_exit_code(source),
            Self::Core(e) => core_exit_code(e),
            Self::Output { .. } => EXIT_OUTPUT,
        }
    }
}
