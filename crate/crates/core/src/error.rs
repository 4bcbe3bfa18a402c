use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Enclosures still overlap at the precision cap; the caller has to raise it.
    #[error("precision exhausted: enclosures not separated at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    /// A proven inequality did not hold. This signals an implementation bug.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("enumeration box of {size} points exceeds the guard of {limit}")]
    BoxTooLarge { size: u128, limit: u128 },

    #[error("census grid of {size} points exceeds the guard of {limit}")]
    GridTooLarge { size: u128, limit: u128 },

    #[error("input is not an exact rational vector")]
    IrrationalInput,

    #[error("exponent {tau} is at or above the threshold 1/(n-1) for n = {n}")]
    ThresholdViolated { tau: String, n: usize },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("dimension {0} is too small for this operation (needs n >= 2)")]
    DimensionTooSmall(usize),

    #[error("period sequence too shallow: {0}")]
    SequenceTooShallow(String),

    #[error("resonance detected: {0}")]
    ResonanceDetected(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
