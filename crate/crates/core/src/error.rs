use thiserror::Error;

/// Errors produced by construction, linear algebra, solvers and probes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("parameter inconsistency: {0}")]
    ParameterInconsistency(String),

    #[error("conjugate gradient did not converge within {max_iter} iterations (relative residual {residual:.3e})")]
    Unconverged { residual: f64, max_iter: usize },

    #[error("line search exceeded {doublings} doublings at iteration {iter}; check the problem metadata")]
    LineSearchRunaway { iter: usize, doublings: u32 },

    #[error("estimating-sequence audit violated at iteration {iter}: lhs {lhs:.6e} > rhs {rhs:.6e}")]
    AuditViolation { iter: usize, lhs: f64, rhs: f64 },

    #[error("missing data: {0}")]
    MissingData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn non_finite(context: impl Into<String>) -> Self {
        Error::NonFinite {
            context: context.into(),
        }
    }
}
