//! Frame-semantic annotation of aligned parallel text and contrastive
//! frame-shift analysis.

pub mod annotation;
pub mod contrastive;
pub mod corpus;
pub mod diagnostic;
pub mod error;
pub mod evocation;
pub mod lexicon;
pub mod text;
mod xml;

pub use diagnostic::{error_count, Diagnostic, Location, Severity};
pub use error::{Error, Result};
pub use text::Lang;
