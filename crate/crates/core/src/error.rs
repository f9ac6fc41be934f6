use thiserror::Error;

use crate::dynamics::Trajectory;

/// Errors raised by the model, verification and dynamics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} outside the admissible range [{min}, {max}]")]
    Range { index: usize, min: usize, max: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fixed-point iteration did not converge at t = {time} after {iterations} iterations")]
    NonConvergence { time: f64, iterations: usize },

    /// A guarded singularity came within the guard radius. `partial` holds
    /// every state up to and including the last safe one.
    #[error("singular approach at t = {time}: {reason}")]
    SingularApproach {
        time: f64,
        reason: String,
        partial: Box<Trajectory>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
