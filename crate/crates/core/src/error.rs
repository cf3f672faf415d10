use std::path::PathBuf;

use thiserror::Error;

/// A charge string that could not be turned into a [`ChargeCode`](crate::charge::ChargeCode).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty charge string")]
    Empty,
    #[error("no leading statute number in {0:?}")]
    NoStatute(String),
    #[error("unknown derivative prefix {prefix:?} in {raw:?}")]
    UnknownDerivative { prefix: String, raw: String },
    #[error("unbalanced parenthesis in {0:?}")]
    Unbalanced(String),
}

/// Invalid or incomplete configuration, or an input that falls outside what a
/// configuration covers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
    #[error("raw {prediction} score {raw} is outside the breakpoint table [{min}, {max}]")]
    RawScoreOutOfRange {
        prediction: &'static str,
        raw: i64,
        min: i64,
        max: i64,
    },
    #[error("decision matrix has no level at fta={fta}, nca={nca}")]
    MissingCell { fta: u8, nca: u8 },
    #[error("sub-score {name}={value} is outside 1..=6")]
    SubScoreOutOfRange { name: &'static str, value: u8 },
    #[error("probability {name}={value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
}

impl ConfigError {
    pub(crate) fn invalid(file: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            file: file.into(),
            message: message.into(),
        }
    }
}

/// Row-addressed problem in one of the tabular inputs.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{file} row {row}: {message}")]
pub struct RowError {
    pub file: String,
    /// 1-based data row (the header is row 0).
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("no observations")]
    EmptyInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("court case {court_number} still has undisposed charges")]
pub struct NotDisposed {
    pub court_number: String,
}

/// Top-level error for file-backed operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("schema error in {file}: {message}")]
    Schema { file: String, message: String },
    #[error(transparent)]
    Row(#[from] RowError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
