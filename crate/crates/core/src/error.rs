use alloc::string::String;

/// Malformed bracket text. `offset` is the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Infeasible,
    #[error("polytope is not full-dimensional: expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("equality row {row} has no coefficient equal to +1 or -1")]
    NoUnimodularPivot { row: usize },
    #[error("equality rows are inconsistent (row {row} reduces to a nonzero constant)")]
    InconsistentEqualities { row: usize },
    #[error("cone contains a line")]
    NotPointed,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Mismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComputeError {
    #[error("linear form is not regular on this piece")]
    RegularityViolation,
    #[error("division by zero in series expansion")]
    DivisionByZero,
    #[error("no admissible random choice after {attempts} attempts")]
    ExhaustedRetries { attempts: u32 },
    #[error("expansion exceeds the budget of {budget} terms")]
    BudgetExceeded { budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Compute(#[from] ComputeError),
}
