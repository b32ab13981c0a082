use thiserror::Error;

/// Failures raised by the numerical kernels and chain builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} at {value}")]
    Domain { what: String, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate spectrum: min {min} and max {max} coincide")]
    DegenerateSpectrum { min: f64, max: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("quadrature exceeded depth {max_depth}; best estimate {estimate}")]
    Accuracy { estimate: f64, max_depth: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operands are not Loewner ordered: smallest eigenvalue of the difference is {gap}")]
    NotOrdered { gap: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, value: f64) -> Self {
        Error::Domain {
            what: what.into(),
            value,
        }
    }

    /// Errors that stem from inputs violating a stated precondition, as opposed
    /// to malformed input or numerical breakdown.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::InvalidParameter(_)
                | Error::Shape(_)
                | Error::DegenerateSpectrum { .. }
                | Error::Precondition(_)
                | Error::NotOrdered { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
