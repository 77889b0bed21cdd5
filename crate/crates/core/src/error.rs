use thiserror::Error;

use crate::validate::ValidationReport;

#[derive(Debug, Error)]
pub enum HdtsError {
    #[error("invalid label {0:?}: labels are nonempty, printable and contain no whitespace")]
    InvalidLabel(String),

    #[error("invalid identifier {0:?}: identifiers are nonempty and contain no whitespace")]
    InvalidId(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("unknown action {0:?}")]
    UnknownAction(String),

    #[error("transition of dimension {dimension} exceeds the cap {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("validation failed: {0}")]
    Invalid(ValidationReport),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lifting square does not commute")]
    NonCommutingSquare,

    #[error("maps do not compose: codomain of the first is not the domain of the second")]
    NotComposable,

    #[error("search limit of {0} nodes exceeded")]
    SearchLimit(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
}

pub type Result<T, E = HdtsError> = std::result::Result<T, E>;
