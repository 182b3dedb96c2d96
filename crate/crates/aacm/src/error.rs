//! Error taxonomy shared by every module.

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A Bernoulli-type value whose denominator is divisible by p.
    #[error("pole: {0}")]
    Pole(String),
    /// Requested precision is not representable (p^k overflow, n too large).
    #[error("unsupported precision: {0}")]
    Precision(String),
    /// Character twist outside the quadratic family handled here.
    #[error("unsupported character: {0}")]
    UnsupportedCharacter(String),
    /// Configured resource bound exceeded (continued-fraction period, form bounds).
    #[error("resource limit: {0}")]
    Resource(String),
    /// A condition the mathematics guarantees failed; always a bug.
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
