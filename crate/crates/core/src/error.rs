use thiserror::Error;

/// Errors produced by the numerics, enumeration and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported dimension n={n}: {reason}")]
    UnsupportedDimension { n: u32, reason: &'static str },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    /// The work estimate of an enumeration or all-pairs pass exceeds its budget.
    #[error("resource budget exceeded for {what}: estimated {estimated} > budget {budget}{hint}")]
    Budget { what: &'static str, estimated: u128, budget: u128, hint: &'static str },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("dimension mismatch: histogram has n={histogram}, distribution has n={distribution}")]
    DimensionMismatch { histogram: u32, distribution: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
