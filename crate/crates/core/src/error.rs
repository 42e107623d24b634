use thiserror::Error;

/// Errors raised by the numeric kernels and the distribution surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates a family constraint; the message names it.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An adaptive routine ran out of budget. The best estimate is kept.
    #[error("{what} did not converge: estimate {estimate:e}, error bound {err_estimate:e}")]
    Convergence {
        what: &'static str,
        estimate: f64,
        err_estimate: f64,
    },

    /// The requested evaluation route cannot deliver its error budget here.
    #[error("route refused: {0}")]
    Route(String),

    /// The point-mass stable law (alpha = 1) has no pointwise density.
    #[error("degenerate law: {0}")]
    Degenerate(String),

    /// Two evaluation routes that must agree did not.
    #[error("{what}: routes disagree ({left:e} vs {right:e})")]
    Mismatch {
        what: &'static str,
        left: f64,
        right: f64,
    },

    #[error("sampling error: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
