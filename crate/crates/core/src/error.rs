use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("quaternion mode requires a stereo input, got {channels} channel(s)")]
    ModeInput { channels: usize },

    #[error("reference signal is silent")]
    SilentReference,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("SVD did not converge")]
    SvdNoConvergence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
