//! Error type shared by all library modules.

use crate::element::Element;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported cluster size {size} for shape {shape}; valid sizes: {valid:?}")]
    UnsupportedSize {
        shape: String,
        size: usize,
        valid: Vec<usize>,
    },

    #[error("bad neighbor cutoff {cutoff} Å: produced coordination number {cn} > 12")]
    BadCutoff { cutoff: f64, cn: usize },

    #[error("operation requires a monometallic structure, found {0} species")]
    NotApplicable(usize),

    #[error("no potential parameters for element {0}")]
    MissingParams(Element),

    #[error("atoms {i} and {j} are {r:.4} Å apart (< {min:.2} Å)")]
    SingularGeometry { i: usize, j: usize, r: f64, min: f64 },

    #[error("no bulk reference entry for element {0}")]
    MissingReference(Element),

    #[error("parameter fit failed for {element}: {reason} (residuals: lc {lc_residual:.3e}, e {e_residual:.3e})")]
    FitFailure {
        element: Element,
        reason: String,
        lc_residual: f64,
        e_residual: f64,
    },

    #[error("linear fit failed for element {element}: {reason}")]
    LinearFitFailure { element: Element, reason: String },

    #[error("no model for element {0}")]
    MissingModel(Element),

    #[error("lattice scan over [{lo}, {hi}] Å has its minimum at the boundary; widen the range")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("model file error: {0}")]
    ModelIo(String),

    #[error("xyz parse error at line {line}: {message}")]
    XyzParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
