// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {what} needs {needed} but the budget is {budget}")]
    Resource {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("consistency error: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }

    pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::Dimension { expected, actual })
        }
    }

    pub(crate) fn check_budget(what: &'static str, needed: u128, budget: u128) -> Result<()> {
        if needed <= budget {
            Ok(())
        } else {
            Err(Error::Resource {
                what,
                needed,
                budget,
            })
        }
    }
}
