use thiserror::Error;

/// Errors raised by the numerical routines and the samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("series not converged after {terms} terms (remainder bound {bound:e})")]
    SeriesNotConverged { terms: usize, bound: f64 },

    #[error(
        "quadrature not converged: value {value} with error estimate {error:e} \
         after {subdivisions} subdivisions"
    )]
    QuadratureNotConverged {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("radius too close to the start radius: gamma = {gamma} exceeds 1 - {eps}")]
    NearDiagonal { gamma: f64, eps: f64 },

    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error("insufficient tail data: {0}")]
    InsufficientTailData(String),

    #[error("path step budget of {0} steps exhausted")]
    StepBudget(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Bracketing(_)
                | Error::SeriesNotConverged { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::Overflow(_)
                | Error::InsufficientTailData(_)
                | Error::StepBudget(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
