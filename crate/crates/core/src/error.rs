use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A point does not belong to the phase space of the system.
    #[error("domain error: {0}")]
    Domain(String),

    /// A system description violates its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Malformed or out-of-range user input.
    #[error("input error: {0}")]
    Input(String),

    /// An operation was called outside its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A symbol sequence uses a forbidden transition.
    #[error("subshift error: {0}")]
    Subshift(String),

    #[error("property* search failed at level {level}: {reason}")]
    PropertyStar { level: usize, reason: String },

    #[error("no common block length at level {level}: {diagnostics}")]
    NoCommonLength { level: usize, diagnostics: String },

    #[error("no exact shadowing available: {0}")]
    NoShadowing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
