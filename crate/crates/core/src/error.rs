use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagnostic::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: u32, column: u32, message: String },

    #[error("integrity check failed with {} finding(s): {}", .0.len(), summarize(.0))]
    Integrity(Vec<Diagnostic>),

    #[error("unknown frame `{0}`")]
    UnknownFrame(String),

    #[error("paragraph counts differ across languages: {}", format_counts(.0))]
    Alignment(BTreeMap<String, usize>),

    #[error("illegal transition: cannot {action} a set with status {status}")]
    IllegalTransition { status: String, action: String },

    #[error("frame element `{0}` is already realized by a span")]
    AlreadyRealized(String),

    #[error("span ({start}, {end}) is outside a text of {len} code points")]
    SpanOutOfBounds { start: usize, end: usize, len: usize },

    #[error("layer {name} at rank {rank} is already present")]
    DuplicateLayer { name: String, rank: u32 },

    #[error("parallelism is undefined for an empty shift table")]
    DivisionUndefined,
}

impl Error {
    pub(crate) fn parse(line: u32, column: u32, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Stable short code, used for machine-readable error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::Integrity(_) => "IntegrityError",
            Error::UnknownFrame(_) => "UnknownFrame",
            Error::Alignment(_) => "AlignmentError",
            Error::IllegalTransition { .. } => "IllegalTransition",
            Error::AlreadyRealized(_) => "AlreadyRealized",
            Error::SpanOutOfBounds { .. } => "SpanOutOfBounds",
            Error::DuplicateLayer { .. } => "DuplicateLayer",
            Error::DivisionUndefined => "DivisionUndefined",
        }
    }
}

fn summarize(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| format!("{} {}", d.code, d.message))
        .collect::<Vec<_>>()
        .join("; ")
}

fn format_counts(counts: &BTreeMap<String, usize>) -> String {
    counts
        .iter()
        .map(|(lang, n)| format!("{lang}={n}"))
        .collect::<Vec<_>>()
        .join(", ")
}
