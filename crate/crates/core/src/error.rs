use thiserror::Error;

/// Errors produced while validating inputs or building spanners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpannerError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {index} lies outside the free space")]
    OutsideFreeSpace { index: usize },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("exhaustive check needs {required} (removal set, pair) checks, over the budget of {budget}; use sampled mode with about {hint_trials} trials")]
    OverBudget {
        required: u128,
        budget: u128,
        hint_trials: usize,
    },
}

pub type Result<T> = std::result::Result<T, SpannerError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(SpannerError::InvalidInput(msg.into()))
}
