//! CLI error taxonomy and process exit codes.

use npscreen_core::CoreError;
use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, missing inputs, malformed files.
    Validation(String),
    /// The numerics failed outright (fit failure, singular system, ...).
    Numerical(String),
    /// The run finished but skipped part of the work.
    Partial { message: String, skipped: Vec<usize> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Partial { .. } => EXIT_PARTIAL,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Partial { message, skipped } => {
                write!(f, "partial completion: {message} (skipped: {skipped:?})")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_)
            | CoreError::UnsupportedSize { .. }
            | CoreError::BadCutoff { .. }
            | CoreError::NotApplicable(_)
            | CoreError::MissingParams(_)
            | CoreError::MissingReference(_)
            | CoreError::MissingModel(_)
            | CoreError::ModelIo(_)
            | CoreError::XyzParse { .. }
            | CoreError::Io(_) => CliError::Validation(e.to_string()),
            CoreError::SingularGeometry { .. }
            | CoreError::FitFailure { .. }
            | CoreError::LinearFitFailure { .. }
            | CoreError::BracketFailure { .. }
            | CoreError::NumericalFailure(_) => CliError::Numerical(e.to_string()),
        }
    }
}
