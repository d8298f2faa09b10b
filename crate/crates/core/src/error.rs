use thiserror::Error;

/// Errors raised by the exact and numeric q-series machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QlabError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("index {index} out of range (order {order})")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("sum does not terminate: {0}")]
    NonTerminating(String),

    #[error("q lies outside the open unit disc")]
    OutsideUnitDisc,

    #[error("no convergence after {terms} terms")]
    NonConvergence { terms: usize },

    /// The tracked magnitudes show that `working_digits` cannot deliver the
    /// requested accuracy; `required_digits` is the estimate that would.
    #[error("precision guard: {working_digits} working digits, about {required_digits} required")]
    PrecisionGuard {
        working_digits: usize,
        required_digits: usize,
    },
}

pub type Result<T> = std::result::Result<T, QlabError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(QlabError::InvalidParameter(msg.into()))
}
