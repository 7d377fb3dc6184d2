//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by mesh construction, linear algebra, and time stepping.
#[derive(Debug, Error)]
pub enum Error {
    /// Mesh constructor arguments violate a precondition.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// Vector length does not match the operator dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Factorization found a rank deficiency larger than one.
    #[error("matrix {label}: rank deficiency beyond a one-dimensional kernel")]
    UnsupportedKernel { label: String },

    /// `solve` was called on a factorization that carries a kernel.
    #[error("matrix {label} has a kernel; use solve_augmented")]
    KernelPresent { label: String },

    /// `solve_augmented` was called without a detected kernel.
    #[error("matrix {label} has no detected kernel; use solve")]
    NoKernel { label: String },

    /// The fixed-point iteration did not meet the stopping tolerance.
    #[error(
        "fixed-point iteration diverged after {iterations} iterations (residual {residual:e})"
    )]
    Diverged { iterations: usize, residual: f64 },

    /// Time step refused because the CFL number exceeds the scheme limit.
    #[error("CFL number {mu} exceeds the scheme limit {limit}")]
    CflExceeded { mu: f64, limit: f64 },

    /// The dispersion relation is singular at the requested wave number.
    #[error("dispersion relation singular at k*dx = {k_dx}")]
    DispersionSingularity { k_dx: f64 },

    /// A state of the wrong scheme variant was passed to an operation.
    #[error("state mismatch: expected a {expected} state")]
    StateMismatch { expected: &'static str },

    /// Refinement levels must double.
    #[error("refinement sequence is not dyadic: {0:?}")]
    NonDyadic(Vec<usize>),

    /// Generic numerical breakdown (singular pivot, defective pencil, ...).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
