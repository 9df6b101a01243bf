use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the simulator. Variants are grouped by failure class
/// so front ends can map them onto distinct exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: frequency {frequency} Hz does not increase on the previous sample")]
    Ordering { line: u64, frequency: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("frequency {frequency} Hz outside sampled range [{min}, {max}] Hz of '{species}'")]
    Range {
        species: String,
        frequency: f64,
        min: f64,
        max: f64,
    },

    #[error("no absorption spectrum for species '{0}'")]
    MissingSpecies(String),

    #[error("spectra disagree on {0}")]
    Consistency(String),

    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    Shape {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("configuration: {0}")]
    Config(String),

    #[error("numerical failure{}: {message}", trial.map(|t| format!(" in trial {t}")).unwrap_or_default())]
    Numerical { trial: Option<usize>, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
