use std::io;
use std::path::PathBuf;

use framealign_core::Diagnostic;
use serde_json::{json, Value};
use thiserror::Error;

pub type Result<T, E = AppError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] framealign_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("{0} not found")]
    NotFound(String),

    #[error("rejected with {} finding(s)", .0.len())]
    Validation(Vec<Diagnostic>),

    #[error("{0}")]
    Usage(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            AppError::Core(e) => e.code(),
            AppError::Io { .. } => "IoError",
            AppError::Config { .. } => "ConfigError",
            AppError::NotFound(_) => "NotFound",
            AppError::Validation(_) => "ValidationError",
            AppError::Usage(_) => "UsageError",
        }
    }

    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Io { .. } | AppError::Config { .. } => 3,
            _ => 1,
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            AppError::Validation(d) | AppError::Core(framealign_core::Error::Integrity(d)) => d,
            _ => &[],
        }
    }

    /// The machine-readable form written to stderr and HTTP error bodies.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "error": self.code(), "message": self.to_string() });
        if let AppError::Core(framealign_core::Error::Alignment(counts)) = self {
            body["paragraph_counts"] = json!(counts);
        }
        let diags = self.diagnostics();
        if !diags.is_empty() {
            body["diagnostics"] = json!(diags);
        }
        body
    }
}
