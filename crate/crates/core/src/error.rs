use thiserror::Error;

/// Errors raised by the transform, quadrature and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must satisfy gamma > -1/2, got {0}")]
    InvalidOrder(f64),

    #[error("b must be nonzero")]
    ZeroB,

    #[error("{what} outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("order mismatch: rule built for gamma = {rule}, parameters carry gamma = {params}")]
    OrderMismatch { rule: f64, params: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("singular angle theta = {0}: sin(theta) vanishes")]
    SingularAngle(f64),

    #[error("signal has zero norm")]
    ZeroSignal,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
