use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("conditional state has zero weight (norm² = {norm_sq:e})")]
    ZeroConditional { norm_sq: f64 },

    #[error("need at least {batches} usable rounds for {batches} batches, got {rounds}")]
    EmptyBatch { rounds: usize, batches: usize },

    #[error("dense representation requested for n = {n} (limit {max})")]
    DenseTooLarge { n: usize, max: usize },

    #[error("eigensolver did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },

    #[error("support size {size} exceeds limit {max}")]
    SupportTooLarge { size: usize, max: usize },

    #[error("support graph is disconnected")]
    Disconnected,

    #[error("rejection constant invalid: observed ratio {ratio} exceeds C = {c}")]
    CInvalid { ratio: f64, c: f64 },

    #[error("sampling budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
