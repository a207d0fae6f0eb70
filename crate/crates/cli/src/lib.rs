//! Command-line front end for `skewrank`.
//!
//! Exit codes: 0 success, 1 self-test failure, 2 invalid input, 3 numerical
//! failure, 4 target outside the attainable range, 5 tied data.

pub mod args;
pub mod commands;
pub mod doc;
pub mod figures;
pub mod selftest;

use skewrank::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_ATTAINABILITY: i32 = 4;
pub const EXIT_TIES: i32 = 5;

/// An error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::Input(_) => EXIT_INPUT,
            Error::Matrix(_) | Error::Integration { .. } | Error::NoConvergence { .. } | Error::NonIdentified(_) => {
                EXIT_NUMERIC
            }
            Error::OutOfAttainableRange { .. } => EXIT_ATTAINABILITY,
            Error::Ties { .. } => EXIT_TIES,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}
