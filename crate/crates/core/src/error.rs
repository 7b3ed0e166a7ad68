//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the density pipeline and its supporting machinery.
#[derive(Debug, Clone, Error)]
pub enum KrError {
    /// A argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The constraint covariance block is singular or too ill-conditioned to
    /// invert. For real coefficients this happens on and near the real locus,
    /// where the imaginary constraint components vanish identically.
    #[error("degenerate covariance ({0})")]
    DegenerateCovariance(String),

    /// A NaN or infinity escaped a numeric stage.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// The real/complex density gap is below the floating-point floor over
    /// the whole requested degree range, so no decay rate can be fitted.
    #[error("decay rate unresolvable: {0}")]
    RateUnresolvable(String),

    /// The simultaneous root iteration failed to converge.
    #[error("root finding failed after {sweeps} sweeps (max correction {max_correction:.3e})")]
    RootFindFailure { sweeps: usize, max_correction: f64 },

    /// Too many samples were discarded for the estimator to stay trusted.
    #[error("root finding failed for {n_failed} of {n_requested} samples (above the 0.1% budget)")]
    ExcessiveFailureRate { n_failed: usize, n_requested: usize },

    /// Matrix or vector dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, KrError>;
