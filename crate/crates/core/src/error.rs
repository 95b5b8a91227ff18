//! Error type shared across the crate.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A delimited or line-delimited input failed to parse.
    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Input parsed but violates a data contract (ratings out of range,
    /// duplicate rows, bad config values, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The `Turn N: USER/ASSISTANT` text format was malformed.
    #[error("turn format error (turn {turn}): {message}")]
    TurnFormat { turn: usize, message: String },

    /// A prompt template could not be rendered.
    #[error("render error for template `{template}`: {message}")]
    Render { template: String, message: String },

    /// A model reply did not match the expected reply grammar.
    #[error("reply parse error: {0}")]
    ReplyParse(String),

    /// Transport failed after exhausting retries.
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },

    /// Authentication/authorization failure; never retried.
    #[error("auth error: {0}")]
    Auth(String),

    /// An operation was invoked outside its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A pipeline stage was run before its inputs exist.
    #[error("dependency error: stage `{required}` must run first")]
    Dependency { required: String },

    /// Structural mismatch between two dialogs (e.g. turn counts differ).
    #[error("structural error: {0}")]
    Structure(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 validation, 3 dependency, 4 transport.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::TurnFormat { .. }
            | Error::Render { .. }
            | Error::ReplyParse(_)
            | Error::Contract(_)
            | Error::Structure(_) => 2,
            Error::Dependency { .. } => 3,
            Error::Transport { .. } | Error::Auth(_) => 4,
            Error::Io { .. } => 1,
        }
    }
}
