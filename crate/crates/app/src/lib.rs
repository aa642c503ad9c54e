//! Command-line tool and review service over a framealign workspace.

pub mod cli;
pub mod error;
pub mod http;
pub mod ops;
pub mod workspace;

pub use error::{AppError, Result};
pub use ops::Service;
pub use workspace::Workspace;
