use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] schmidtkit::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn record(&self) -> ErrorRecord {
        let mut record = ErrorRecord {
            kind: String::new(),
            message: self.to_string(),
            line: None,
            column: None,
            field: None,
        };
        match self {
            Self::Core(e) => record.kind = e.kind().into(),
            Self::Io { .. } => record.kind = "Io".into(),
            Self::Parse { line, column, .. } => {
                record.kind = "Parse".into();
                record.line = Some(*line);
                record.column = Some(*column);
            }
            Self::Field { field, .. } => {
                record.kind = "Field".into();
                record.field = Some(field.clone());
            }
            Self::Usage(_) => record.kind = "Usage".into(),
        }
        record
    }
}

/// Machine-readable error emitted on exit code 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

pub type CliResult<T> = std::result::Result<T, CliError>;
