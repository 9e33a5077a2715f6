//! Shared error and result types.

use crate::spectral::ConvergenceReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by model construction and the solvers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the requested
    /// quantity (non-positive temperature or separation, y below the
    /// integration floor, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A model type was handed parameters that violate its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An integrand sample evaluated to NaN or infinity.
    #[error("non-finite value while {context} (y = {y})")]
    NonFinite { context: &'static str, y: f64 },

    /// The Matsubara sum hit its term cap before meeting the tolerance.
    #[error(
        "Matsubara sum not converged after {} terms (last term / total = {:.3e})",
        report.terms_used,
        report.last_term_ratio
    )]
    SumNotConverged { report: ConvergenceReport },

    /// The dilute-gas extrapolation produced inconsistent diagnostics
    /// (e.g. the sequence of per-density values is not settling).
    #[error("rarefaction diagnostic failure: {0}")]
    RarefactionDiagnostic(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
