use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configured cap (entry size, fill, enumeration order) was hit.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The requested computation is larger than the configured budget.
    #[error("infeasible within budget: {0}; use reductions")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// `d ∘ d ≠ 0` or an image escaping a kernel; always an upstream bug.
    #[error("broken differential: {0}")]
    BrokenDifferential(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("rule inapplicable: {0}")]
    Inapplicable(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }

    /// Errors that mean "too big", as opposed to wrong.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::ResourceLimit(_) | Error::Infeasible(_))
    }
}
