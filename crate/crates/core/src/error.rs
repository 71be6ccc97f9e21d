//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the spectral pipeline.
#[derive(Debug, Error)]
pub enum SpectralError {
    /// Operator-spec JSON could not be parsed or violated a structural rule.
    #[error("invalid operator spec: {0}")]
    InvalidSpec(String),

    /// The leading coefficient is not a nonzero constant.
    #[error("leading coefficient must be a nonzero constant: {0}")]
    NonconstantLeadingCoefficient(String),

    /// Requested tolerance outside the supported range.
    #[error("tolerance {0:e} outside supported range [1e-14, 1e-6]")]
    ToleranceOutOfRange(f64),

    /// Adaptive step control drove the step size below the representable floor.
    #[error("step size underflow at t = {t} (coefficient blow-up?)")]
    StepSizeUnderflow { t: f64 },

    /// An internal identity that must hold (e.g. nonsingular monodromy) failed.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// The QR iteration for the Schur form did not converge.
    #[error("Schur decomposition did not converge after {0} sweeps")]
    SchurNoConvergence(usize),

    /// The exponent eigenbasis is too ill-conditioned to use.
    #[error("defective Floquet exponents: eigenvector condition number {condition:.3e} exceeds {limit:.1e}")]
    DefectiveExponents { condition: f64, limit: f64 },

    /// A unit-circle multiplicator forbids building the Green kernel directly.
    #[error("lambda lies on the continuous spectrum (margin {margin:.3e}); use a continuation branch")]
    OnContinuousSpectrum { margin: f64 },

    /// Operation requires a specific operator order.
    #[error("operation requires order {expected}, spec has order {actual}")]
    UnsupportedOrder { expected: usize, actual: usize },

    /// Input function does not decay enough at the truncation boundary.
    #[error("input does not decay at the grid ends: boundary magnitude {boundary:.3e} of max {max:.3e}")]
    TruncationError { boundary: f64, max: f64 },

    /// Branch seed sits on (or too close to) the computed bands.
    #[error("branch seed on the continuous spectrum (margin {margin:.3e} <= {required:.1e})")]
    SeedOnSpectrum { margin: f64, required: f64 },

    /// Two tracked multiplicators collided along a continuation path.
    #[error("multiplicator collision near lambda = {lambda} (gap {gap:.3e}); branch identity ambiguous")]
    BranchAmbiguity { lambda: Complex64, gap: f64 },

    /// The branch validity inequalities fail at the requested point.
    #[error("lambda = {lambda} outside the continuation region of the branch (violation {violation:.3e})")]
    OutsideContinuationRegion { lambda: Complex64, violation: f64 },

    /// Winding number stayed non-integer after contour refinement.
    #[error("contour integral not within 1e-3 of an integer after refinement (got {value})")]
    ContourTooCoarse { value: Complex64 },

    /// Newton iteration failed to converge.
    #[error("Newton iteration failed: {0}")]
    NewtonFailure(String),

    /// Invalid numeric parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, SpectralError>;
