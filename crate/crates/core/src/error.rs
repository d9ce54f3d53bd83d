use thiserror::Error;

/// Errors raised by the evaluators, the function classes and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zeta has a simple pole at s = 1")]
    PoleAtOne,

    #[error("gamma has a pole at the non-positive integer {0}")]
    PoleAtNonPositiveInteger(i64),

    #[error("requested accuracy {target:e} is not reachable (best certified {achieved:e})")]
    PrecisionUnreachable { target: f64, achieved: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constraint violated: sum h_k/l_k = {0:e}")]
    ConstraintViolated(f64),

    #[error("duplicate dilation {0}")]
    DuplicateDilation(f64),

    #[error("function is not flagged as constrained")]
    NotConstrained,

    #[error("singular system: {0}")]
    SingularSystem(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the requested accuracy rather than the input.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionUnreachable { .. } | Error::SingularSystem(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
