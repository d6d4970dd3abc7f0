use thiserror::Error;

/// Errors returned by the waveform, channel, metric and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transform length {0} is not a power of two")]
    InvalidLength(usize),
    #[error("frame size {0} must be a power of two and at least 8")]
    InvalidFrameSize(usize),
    #[error("unsupported constellation order {0}")]
    UnsupportedOrder(usize),
    #[error("expected {expected} {what}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("spectrum is not Hermitian symmetric at bin {bin}")]
    NotHermitian { bin: usize },
    #[error("time frame violates {kind} at sample {index} (deviation {deviation:e})")]
    SymmetryViolation {
        kind: &'static str,
        index: usize,
        deviation: f64,
    },
    #[error("invalid candidate index {0}")]
    InvalidCandidate(usize),
    #[error("transmit sample {index} is negative ({value})")]
    NegativeSample { index: usize, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("PAPR is undefined for an all-zero frame")]
    UndefinedPapr,
}

pub type Result<T> = std::result::Result<T, Error>;
