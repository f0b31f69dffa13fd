use thiserror::Error;

use crate::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of refinement levels.
    #[error("quadrature did not converge (estimate {best}, error estimate {error:e})")]
    Accuracy { best: Complex64, error: f64 },

    /// The root bracket does not contain a sign change.
    #[error("no sign change in bracket [{lo}, {hi}] (g(lo) = {g_lo}, g(hi) = {g_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// A matrix that must be invertible is rank deficient or too ill-conditioned.
    #[error("rank error: {0}")]
    Rank(String),

    /// Source and observation points coincide.
    #[error("singular geometry: {0}")]
    Singularity(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
