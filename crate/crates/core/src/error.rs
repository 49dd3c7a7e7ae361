use thiserror::Error;

/// Errors raised by the numerical kernels and state constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {max_terms} terms (last term {last_term:e})")]
    Convergence { max_terms: usize, last_term: f64 },

    #[error("state is not normalized: norm deviates from 1 by {0:e}")]
    Normalization(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
