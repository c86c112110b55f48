use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow while {0}")]
    Overflow(String),

    #[error("quadrature did not converge on {what}: achieved error {achieved:.3e}")]
    Quadrature { what: String, achieved: f64 },

    #[error("series truncation failed on {what}: tail bound {tail:.3e}")]
    Truncation { what: String, tail: f64 },

    #[error("lattice index {index}/{denominator} is out of range: {reason}")]
    OutOfRange {
        index: i64,
        denominator: u64,
        reason: String,
    },

    #[error("malformed series data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn overflow(msg: impl Into<String>) -> Error {
    Error::Overflow(msg.into())
}
