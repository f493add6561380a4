use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column} ({field}): {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{entity} fails {check} (violation {magnitude:e})")]
    Validation {
        entity: String,
        check: String,
        magnitude: f64,
    },
    #[error("unknown verb `{0}`")]
    UnknownVerb(String),
    #[error("unknown {kind} `{name}`")]
    UnknownEntity { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {0}", name = .0.name())]
    Domain(#[from] starcone_core::Error),
}

impl CliError {
    /// 1 for domain errors, 2 for usage, parse and load problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Parse { .. } => "ParseError",
            CliError::Validation { .. } => "ValidationError",
            CliError::UnknownVerb(_) => "UnknownVerb",
            CliError::UnknownEntity { .. } => "UnknownEntity",
            CliError::Usage(_) => "UsageError",
            CliError::Domain(e) => e.name(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
