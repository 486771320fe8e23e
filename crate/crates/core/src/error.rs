use thiserror::Error;

/// Errors raised by the geometry, special-function, quadrature and operator modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at input: the image of the point is the point at infinity")]
    Pole,
    #[error("hyperplane normal must have unit length (|a| = {0})")]
    InvalidNormal(f64),
    #[error("ball automorphism center must lie in the open unit ball (|a| = {0})")]
    InvalidCenter(f64),
    #[error("point must lie in the open unit ball (|x| = {0})")]
    OutsideBall(f64),
    #[error("negative radicand {0} in bracket")]
    NegativeRadicand(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} not supported here")]
    UnsupportedDimension(usize),
    #[error("matrix is not orthogonal (max |A·Aᵗ − I| = {0})")]
    NotOrthogonal(f64),
    #[error("gamma function pole at {0}")]
    GammaPole(f64),
    #[error("hypergeometric series not summable: a={a}, b={b}, c={c}, z={z}")]
    NotSummable { a: f64, b: f64, c: f64, z: f64 },
    #[error("series did not converge after {0} terms")]
    NotConverged(usize),
    #[error("quadrature produced a non-finite value at node {0}")]
    IntegrationFailure(usize),
    #[error("exponent p = {0} is outside the range where the formula is established")]
    OutOfScope(f64),
    #[error("measure has zero total variation")]
    ZeroMeasure,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
