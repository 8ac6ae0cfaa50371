use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: u64,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The scene itself cannot support the requested operation, e.g. the
    /// ground-truth optical axis never reaches the fuselage model.
    #[error("invalid setup: {0}")]
    InvalidSetup(String),

    #[error("ray does not intersect the cylinder")]
    NoIntersection,

    #[error("cylinder intersection lies behind the camera")]
    BehindCamera,

    #[error("ray is parallel to the cylinder axis and off the surface")]
    AxisParallelDegenerate,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("internal consistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }

    /// Stable machine-readable category, printed by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io-error",
            Error::Parse { .. } => "parse-error",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidSetup(_) => "invalid-setup",
            Error::NoIntersection | Error::BehindCamera | Error::AxisParallelDegenerate => {
                "geometry-error"
            }
            Error::Degenerate(_) => "degenerate-input",
            Error::Inconsistent(_) => "internal-error",
        }
    }

    /// Process exit code associated with [`Error::category`].
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::Parse { .. } => 4,
            Error::InvalidArgument(_) => 5,
            Error::InvalidSetup(_) => 6,
            Error::NoIntersection | Error::BehindCamera | Error::AxisParallelDegenerate => 7,
            Error::Degenerate(_) => 8,
            Error::Inconsistent(_) => 70,
        }
    }
}
