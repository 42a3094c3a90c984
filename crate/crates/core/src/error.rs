//! Error type shared by all solver modules.

use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum BurgersError {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data was malformed or non-finite.
    #[error("input error: {0}")]
    Input(String),

    /// A quadrature or iterative scheme failed to reach its target accuracy.
    #[error(
        "accuracy error: {context} (estimated error {estimate:.3e} > tolerance {tolerance:.3e})"
    )]
    Accuracy {
        context: String,
        estimate: f64,
        tolerance: f64,
    },

    /// A floating-point intermediate left the representable range.
    #[error("internal overflow while evaluating term m = {m}")]
    Overflow { m: usize },

    /// A recursion step was invoked before its prerequisites were computed.
    #[error("dependency error: {0}")]
    Dependency(String),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An integral ratio became numerically meaningless.
    #[error("near-singular evaluation: {0}")]
    NearSingular(String),

    /// A time integration produced non-finite values.
    #[error("solution blow-up at t = {t:.6}")]
    BlowUp { t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BurgersError>;

impl BurgersError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        BurgersError::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        BurgersError::Input(msg.into())
    }
}
