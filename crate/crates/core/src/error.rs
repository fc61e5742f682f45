//! Error type shared across the library and mapped onto CLI exit codes.

use thiserror::Error;

/// All failure modes the library distinguishes.
///
/// The CLI maps these onto process exit codes via [`Error::exit_code`]:
/// bad arguments, unparseable input, and inconsistent data structures exit
/// with 2; model-domain violations (e.g. an edge probability outside
/// `(0, 1]`) with 3; structured experiment failures (a recoloring walk that
/// dead-ends) with 4; plain I/O trouble with 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("model domain error: {0}")]
    ModelDomain(String),

    #[error("experiment failure: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Parse { .. } | Error::Consistency(_) => 2,
            Error::ModelDomain(_) => 3,
            Error::Experiment(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
