use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A correlation matrix failed validation or factorization.
    #[error("invalid correlation matrix: {0}")]
    Matrix(String),

    /// The integrand returned a non-finite value.
    #[error("integrand returned {value} at point {point:?}")]
    Integration { point: Vec<f64>, value: f64 },

    /// Exact ties were found where continuous data was expected.
    #[error("tied values in coordinate {coordinate}")]
    Ties { coordinate: usize },

    /// The requested rank correlation cannot be reached by any pseudo-correlation.
    #[error("target {target} is outside the attainable range [{low}, {high}]")]
    OutOfAttainableRange { target: f64, low: f64, high: f64 },

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The moment equations do not pin down a unique parameter.
    #[error("parameters not identified: {0}")]
    NonIdentified(String),

    /// Malformed external input (files, documents).
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
