//! File formats and command implementations for the `dbsvol` tool.

pub mod cohort_file;
pub mod commands;
mod error;
pub mod model_file;
pub mod report;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
