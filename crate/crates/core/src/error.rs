use thiserror::Error;

use crate::halfint::HalfInt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngularError {
    #[error("{0} is not a half-integer")]
    NotHalfInteger(f64),
    #[error("angular momentum j = {0} must be non-negative")]
    NegativeJ(HalfInt),
    #[error("j = {j} and m = {m} do not share integer/half-integer character")]
    MixedParity { j: HalfInt, m: HalfInt },
    #[error("angular momentum j = {0} exceeds the supported range (j <= 50)")]
    OutOfRange(HalfInt),
}

/// Errors raised while building states or species data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtomicError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("manifold mismatch: {0}")]
    ManifoldMismatch(String),
    #[error("spherical index q = {0} not in {{-1, 0, +1}}")]
    BadSphericalIndex(i32),
    #[error("no transition line with upper J = {0}")]
    MissingLine(HalfInt),
    #[error("malformed species document: {0}")]
    Malformed(String),
    #[error("invalid species data at {field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Angular(#[from] AngularError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GreenError {
    #[error("atom-surface distance must be positive, got {0} m")]
    NonPositiveDistance(f64),
    #[error("frequency must be positive, got {0} rad/s")]
    NonPositiveFrequency(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integrand returned a non-finite value at u = {at}")]
    NonFinite { at: f64 },
    #[error("no convergence after {subdivisions} subdivisions (value {value:e}, error estimate {abs_error:e})")]
    NonConvergence {
        subdivisions: usize,
        value: f64,
        abs_error: f64,
    },
    #[error("interval near u = {at} shrank below resolution; integrand is likely singular there")]
    Singular { at: f64 },
    #[error("invalid quadrature setup: {0}")]
    InvalidSetup(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplingError {
    #[error(transparent)]
    Atomic(#[from] AtomicError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("retardation parameter kappa = {0} must be positive")]
    NonPositiveKappa(f64),
    #[error(
        "closed-form leading-order shift needs a J = 1/2 lower level, nuclear spin 3/2 and D-line upper levels: {0}"
    )]
    UnsupportedSpecies(String),
    #[error("diagonal damping must be non-negative: {0}")]
    NegativeDamping(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("initial state is not normalized: |a_g|^2 + |a_e|^2 = {0}")]
    Unnormalized(f64),
    #[error("evolution time must be non-negative, got {0} s")]
    NegativeTime(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("distance {z} m lies outside the anchored range [40 nm, 270 nm]; no extrapolation is performed")]
    Unanchored { z: f64 },
    #[error("skin depth must be positive, got {0} m")]
    NonPositiveSkinDepth(f64),
}
