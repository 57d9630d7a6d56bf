use thiserror::Error;

/// Errors shared across the transform, shrinkage, and pipeline layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Signal length must be a power of two (periodized transform).
    #[error("signal length {len} is not a positive power of two")]
    NonDyadicLength { len: usize },

    /// Coarse level out of range for the given signal length.
    #[error("coarse level j0={j0} out of range: need 1 <= j0 < {max} for length 2^{max}")]
    CoarseLevelOutOfRange { j0: usize, max: usize },

    /// Pyramid levels do not have the lengths the dyadic layout demands.
    #[error("malformed coefficient pyramid: {reason}")]
    MalformedPyramid { reason: String },

    /// A numeric or structural argument violated a documented precondition.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Filter name not in the built-in bank.
    #[error("unknown wavelet filter {name:?} (expected \"haar\" or \"sym8\")")]
    UnknownFilter { name: String },

    /// Test-signal name not in the catalog.
    #[error("unknown test signal {name:?}")]
    UnknownSignal { name: String },

    /// Estimator name not in the catalog.
    #[error("unknown method {name:?}")]
    UnknownMethod { name: String },

    /// Two paired vectors disagree in length.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Signal is constant, so a signal-to-noise ratio cannot scale it.
    #[error("signal is constant; cannot calibrate noise to a signal-to-noise ratio")]
    ConstantSignal,
}

pub type Result<T> = std::result::Result<T, Error>;
