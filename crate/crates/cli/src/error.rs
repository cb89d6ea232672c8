use std::path::PathBuf;

use thiserror::Error;

/// Exit codes of the command-line contract.
pub mod exit {
    pub const OK: i32 = 0;
    /// Witness budget exhausted, or a selected law failed.
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: malformed matrix file at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },

    #[error(transparent)]
    Numeric(#[from] superdyn::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(superdyn::Error::NonConvergence { .. })
            | CliError::Numeric(superdyn::Error::Singular) => exit::NUMERICAL,
            _ => exit::USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
