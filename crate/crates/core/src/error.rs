use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in golden-ring {op}")]
    Overflow { op: &'static str },

    #[error("cannot mix exact and float scalars")]
    ModeMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("real power needs a positive base, got {0}")]
    NonPositiveBase(f64),

    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("sequence term x_{index} overflowed to infinity")]
    NumericOverflow { index: i64 },

    #[error("sequence term x_{index} is not positive")]
    NonPositiveTerm { index: i64 },

    #[error("window of {have} terms is too small, need at least {needed}")]
    WindowTooSmall { needed: usize, have: usize },

    #[error("index {0} is outside the computed window")]
    MissingIndex(i64),

    #[error("degenerate approximation: {0}")]
    Degenerate(String),

    #[error("mutation index {k} out of range for a {n}x{n} matrix")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("not skew-symmetrizable at entries ({i},{j}): {reason}")]
    NotSkewSymmetrizable { i: usize, j: usize, reason: String },

    #[error("brute-force canonical form supports n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    #[error("mutation-infinite up to limit {limit}")]
    LimitExceeded { limit: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
