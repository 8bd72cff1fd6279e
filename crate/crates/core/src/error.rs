use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate domain [{min}, {max}]")]
    Domain { min: f64, max: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("repeated sampling point at index {index}")]
    SingularNodes { index: usize },

    #[error("input vector is zero")]
    ZeroVector,

    #[error("function is not finite at z = {re}{im:+}i")]
    FunctionDomain { re: f64, im: f64 },

    #[error("divergence in step {step} (iteration {iteration}): {reason}")]
    Divergence {
        step: usize,
        iteration: usize,
        reason: String,
    },

    #[error(
        "step {step} did not converge after {iterations} iterations \
         (metric {metric:.3e}); reduce the time step"
    )]
    NonConvergence {
        step: usize,
        iterations: usize,
        metric: f64,
    },
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
