//! Library-wide error type.

use thiserror::Error;

/// Errors produced by synthesis, verification, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("dimension {dim} too small; need at least {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("invalid channel index {index} for {kind} control at dimension {dim}")]
    BadIndex {
        kind: &'static str,
        index: usize,
        dim: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("vector is not unit norm: |norm - 1| = {deviation:.3e}")]
    NotUnit { deviation: f64 },

    #[error("operation requires an {expected} sequence, got {got}")]
    WrongFamily {
        expected: &'static str,
        got: &'static str,
    },

    #[error("amplitude must be positive, got {0}")]
    NonpositiveAmplitude(f64),

    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),

    #[error("concurrent pulses must be Z rotations on distinct levels")]
    NonCommutingStep,

    #[error("deflation failed at stage {stage}: residual {residual:.3e} (convention bug, not an input problem)")]
    DeflationFailure { stage: usize, residual: f64 },

    #[error("phase correction cannot reach the target: residual infidelity {infidelity:.3e}")]
    CorrectionFailed { infidelity: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
