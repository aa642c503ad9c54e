//! Structured validation findings shared by every module.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Where a finding points. Annotation findings use the set/layer/label
/// triple; lexicon and corpus findings name the offending item instead.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub set_id: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub layer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub item: Option<String>,
}

impl Location {
    pub fn item(item: impl Into<String>) -> Self {
        Location {
            item: Some(item.into()),
            ..Location::default()
        }
    }

    pub fn set(set_id: u64) -> Self {
        Location {
            set_id: Some(set_id),
            ..Location::default()
        }
    }

    pub fn label(set_id: u64, layer: impl Into<String>, label: usize) -> Self {
        Location {
            set_id: Some(set_id),
            layer: Some(layer.into()),
            label: Some(label),
            item: None,
        }
    }

    pub fn layer(set_id: u64, layer: impl Into<String>) -> Self {
        Location {
            set_id: Some(set_id),
            layer: Some(layer.into()),
            ..Location::default()
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(item) = &self.item {
            parts.push(item.clone());
        }
        if let Some(id) = self.set_id {
            parts.push(format!("set {id}"));
        }
        if let Some(layer) = &self.layer {
            parts.push(format!("layer {layer}"));
        }
        if let Some(label) = self.label {
            parts.push(format!("label {label}"));
        }
        if parts.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// A single validation finding. `code` values are stable identifiers
/// (`LEX…`, `COR…`, `ANN…`, `CON…`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    pub severity: Severity,
    pub location: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: &str, location: Location, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            severity: Severity::Error,
            location,
            message: message.into(),
        }
    }

    pub fn warning(code: &str, location: Location, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            severity: Severity::Warning,
            location,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}]: {}",
            self.severity, self.code, self.location, self.message
        )
    }
}

/// Number of error-severity findings.
pub fn error_count(diagnostics: &[Diagnostic]) -> usize {
    diagnostics.iter().filter(|d| d.is_error()).count()
}
