use thiserror::Error;

/// Errors raised by field construction, code construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("unsupported field GF({p}^{a})")]
    UnsupportedField { p: u32, a: u32 },

    #[error("invalid polynomial table: {0}")]
    InvalidTable(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid column index set: {0}")]
    InvalidIndex(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("codeword enumeration needs {needed} words, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u128 },

    #[error("point is not on the curve")]
    OffCurve,

    #[error("no perfect matching for the insertion graph")]
    NoPerfectMatching,

    #[error("search exhausted after {0} states")]
    SearchExhausted(usize),

    /// A construction produced something its own proof says cannot happen.
    #[error("internal construction failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
