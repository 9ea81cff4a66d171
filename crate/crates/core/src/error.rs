use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The request exceeds one of the documented operational caps.
    #[error("{operation}: n = {n} exceeds the supported maximum {max}")]
    Capacity {
        operation: &'static str,
        n: usize,
        max: usize,
    },
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("attenuation factor must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("invalid apparatus configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
}
