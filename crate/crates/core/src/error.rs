use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or parameter is outside the domain of the operation.
    #[error("domain error: {field} = {value} ({constraint})")]
    Domain {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The static response has no finite value: D is at or below the singular threshold.
    #[error("singular stability denominator D = {denominator} (squeeze regime)")]
    SingularDenominator { denominator: f64 },

    /// A trajectory left the representable range.
    #[error("numerical overflow at step {step}: price {price} exceeds {limit}")]
    NumericalOverflow { step: usize, price: f64, limit: f64 },

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("invalid config: {field}: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            constraint,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable category used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::SingularDenominator { .. } => "singular",
            Error::NumericalOverflow { .. } => "overflow",
            Error::ConfigParse { .. } => "config_parse",
            Error::ConfigInvalid { .. } => "config_invalid",
            Error::Io { .. } => "io",
        }
    }

    /// Process exit code: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigParse { .. } | Error::ConfigInvalid { .. } => 2,
            Error::Domain { .. }
            | Error::SingularDenominator { .. }
            | Error::NumericalOverflow { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}
