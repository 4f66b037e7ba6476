use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `total` has no representation `x·a + y·b` with `x, y ≥ 0`.
    #[error("{total} is not a non-negative combination of {a} and {b}")]
    NotRepresentable { a: u64, b: u64, total: u64 },

    /// The requested construction's hypotheses do not hold.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// No weighing matrix of the required shape is available.
    #[error("missing ingredient: {0}")]
    IngredientMissing(String),

    #[error("invalid plan{}: {reason}", block.map(|b| format!(" (block {b})")).unwrap_or_default())]
    PlanInvalid { block: Option<usize>, reason: String },

    #[error("numerical failure: {0}")]
    Computation(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A freshly built set did not certify.
    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedParameters(msg.into())
    }

    pub(crate) fn plan(block: Option<usize>, reason: impl Into<String>) -> Self {
        Error::PlanInvalid {
            block,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
