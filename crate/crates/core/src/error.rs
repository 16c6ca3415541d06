use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point or argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid construction parameters (orders, space parameters, weights).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("integrand is NaN at node {index} (z = {z})")]
    NanAtNode { index: usize, z: Complex64 },

    #[error("function is not normalized: p-norm = {norm} (expected 1 within {tolerance:e})")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("the zero function has no normalization")]
    ZeroFunction,

    #[error("ODE step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("one-dimensional quadrature did not converge: {0}")]
    NoConvergence(String),

    /// The distribution changes sign relative to the comparison curve more
    /// than once outside the tolerance band.
    #[error("inconsistent sign pattern: {changes} sign changes outside the band")]
    Inconsistent { changes: usize },

    /// The region is too small to be resolved by the quadrature nodes.
    #[error("region is under-resolved: {0}")]
    Resolution(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
