use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cpns_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed manifest: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 3 parse, 4 validation, 5 convergence, 6 I/O.
    pub fn exit_code(&self) -> i32 {
        use cpns_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Parse { .. } => 3,
                E::Io { .. } => 6,
                E::NotConverged { .. } | E::StepLimit(_) => 5,
                E::InvalidGraph(_)
                | E::InvalidParameter(_)
                | E::TooLarge { .. }
                | E::SketchMismatch(_)
                | E::LengthMismatch(..)
                | E::ZeroVariance
                | E::Incomparable(_) => 4,
            },
            CliError::Manifest { .. } => 3,
            CliError::Io { .. } => 6,
            CliError::Usage(_) => 4,
        }
    }
}
