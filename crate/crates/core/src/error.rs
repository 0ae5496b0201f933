//! Error type shared by the whole crate.
//!
//! Errors split into two families: *invalid input* (malformed field
//! configs, polygons, polynomials — the caller supplied something outside
//! the domain) and *internal limits* (working precision exhausted during
//! root counting). Validation verdicts ("this well-formed polygon violates
//! condition X") are **not** errors; they are returned as ordinary values
//! by the validators so callers can report which condition failed.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A field description is malformed (non-prime p, reducible modulus,
    /// non-Eisenstein defining polynomial, ...).
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// Inversion of zero in a residue field or in O_K.
    #[error("division by zero")]
    DivisionByZero,

    /// A polygon is structurally malformed (not a point set of the required
    /// shape) as opposed to merely violating a validity condition.
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    /// A polynomial that must be Eisenstein is not.
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),

    /// Residual data is structurally malformed for its polygon.
    #[error("invalid residual data: {0}")]
    InvalidResidual(String),

    /// General malformed input (CLI strings, JSON bodies, out-of-range
    /// parameters).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Root counting ran out of working precision even after retries.
    #[error("insufficient precision: {0} digits were not enough")]
    InsufficientPrecision(u64),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
