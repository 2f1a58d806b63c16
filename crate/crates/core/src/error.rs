use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations (best estimate {best}, error {error:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        best: f64,
        error: f64,
    },

    #[error("solver error: {0}")]
    Solver(String),

    /// The requested (n, d, s) lies outside the regime in which a bound is defined.
    #[error("regime error: {0}")]
    Regime(String),

    /// The noise model does not admit an interior minimiser of f(., 0).
    #[error("noise model error: {0}")]
    Model(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
