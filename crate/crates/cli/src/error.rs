use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error("invariant breach: {0}")]
    Breach(String),

    #[error("cannot write {}: {source}", path.as_ref().map_or("stdout".into(), |p| p.display().to_string()))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Breach(_) => 4,
        }
    }

    /// Map a core error raised while evaluating user-supplied parameters.
    pub fn from_eval(err: qtwm_core::Error) -> Self {
        match err {
            qtwm_core::Error::InvariantBreach(msg) => CliError::Breach(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}
