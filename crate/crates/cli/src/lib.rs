//! Pipeline library behind the `npscreen` binary.
//!
//! Every subcommand is a thin wrapper over a `run_*` function here, so the
//! full workflow is scriptable and testable in-process.

pub mod commands;
pub mod config;
pub mod errors;
pub mod pipeline;
pub mod records;

pub use config::{RunConfig, ResolvedConfig};
pub use errors::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_PARTIAL, EXIT_VALIDATION};
