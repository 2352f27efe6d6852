use thiserror::Error;

use crate::lattice::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("vertex {from} is not coordinate-wise below {to}")]
    Domain { from: Vertex, to: Vertex },

    #[error("vertex {vertex} lies outside the window {window}")]
    Bounds { vertex: Vertex, window: String },

    #[error("requested {cells} cells exceeds the memory budget of {budget} cells")]
    Capacity { cells: u128, budget: u128 },

    /// A simulation ran out of room before producing what was asked of it.
    #[error("truncated: {what}; {hint}")]
    Truncation { what: String, hint: String },

    #[error("expected a `{expected}` configuration, got `{found}`")]
    Variant {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("empty sample")]
    EmptySample,

    #[error("alphabet mismatch: {left} vs {right} categories")]
    Alphabet { left: usize, right: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn truncation(what: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::Truncation {
            what: what.into(),
            hint: hint.into(),
        }
    }

    /// True for errors caused by a window, box or horizon that was too small.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Truncation { .. } | Error::Capacity { .. } | Error::Bounds { .. })
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::param("rho", format!("must lie in (0,1), got {rho}")))
    }
}
