use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("cannot read or write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] frftkit::Error),
}

impl CliError {
    pub fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// 2: unreadable or malformed input; 3: numeric degeneracy;
    /// 4: configuration contradiction.
    pub fn exit_code(&self) -> i32 {
        use frftkit::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Config(_) => 4,
            CliError::Core(e) => match e {
                E::InvalidSignal(_) => 2,
                E::AngleDegenerate { .. }
                | E::IrrationalScale(_)
                | E::NoDecay(_)
                | E::TruncationLoss { .. }
                | E::NotHermitian(_) => 3,
                E::InvalidGrid(_)
                | E::GridTooLarge { .. }
                | E::GridMismatch
                | E::OffGridShift { .. }
                | E::PathArityMismatch { .. }
                | E::KeyMismatch(_)
                | E::NonCommutingOps(_)
                | E::WindowTooSmall { .. }
                | E::BadRank { .. }
                | E::NotMultiTile(_)
                | E::InvalidConfig(_) => 4,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
