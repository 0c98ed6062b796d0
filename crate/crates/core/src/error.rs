use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("order {order} is above the supported maximum {max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("invalid harmonic index (n = {degree}, m = {order}): |m| must not exceed n")]
    InvalidIndex { degree: usize, order: i64 },

    #[error("direction is not a unit vector (|x| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("grid of design degree {design} cannot resolve degree {requested}")]
    InsufficientResolution { design: usize, requested: usize },

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("underflow: {0}")]
    Underflow(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
