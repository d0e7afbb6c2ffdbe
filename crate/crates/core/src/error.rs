use thiserror::Error;

use crate::mellin::AnalyticStrip;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("series did not converge within {terms} terms at argument {argument}")]
    NonConvergence { terms: usize, argument: f64 },

    #[error("Re(z) = {re} lies outside the strip {strip}")]
    StripViolation { re: f64, strip: AnalyticStrip },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("no inverse-CDF table has been built for {0}")]
    TableUnavailable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// Failures of the numerical machinery itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Quadrature(_) | Error::Pole(_)
        )
    }
}
