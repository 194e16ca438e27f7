use thiserror::Error;

/// Errors raised by the spectral, norm and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input shape mismatch: {0}")]
    Shape(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("non-finite values produced at t = {time}")]
    Overflow { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
