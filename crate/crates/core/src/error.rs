use thiserror::Error;

use crate::solver::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of an operation (or of a worked configuration) is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structural hypothesis (dimension gap, group assumption, ...) does not hold.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    /// An iterative method stopped before meeting its tolerance.
    #[error("no convergence: {message}")]
    Convergence {
        message: String,
        best: Box<SolveReport>,
    },

    /// An iterate left the positive cone and could not be projected back.
    #[error("degenerate iterate: {0}")]
    Degeneracy(String),

    /// Generic numerical failure (quadrature, linear solve).
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Precondition(_) | Error::Hypothesis(_)
        )
    }
}
