use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::formats::ParseError;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for internal failures, including failed verification.
pub const EXIT_INTERNAL: i32 = 1;
/// Exit status for bad arguments or malformed input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },

    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot create output directory {}: {source}", path.display())]
    OutputDir { path: PathBuf, source: io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Library(#[from] slinkage::Error),

    #[error("verification failed: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use slinkage::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Read { .. } | CliError::OutputDir { .. } => {
                EXIT_USAGE
            }
            CliError::Write { .. } | CliError::Mismatch(_) | CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Library(e) => match e {
                E::NoAdmissibleCandidate { .. }
                | E::AlreadyConnected
                | E::InvalidTree(_)
                | E::ConnectDidNotConverge { .. } => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            },
        }
    }
}
