use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dense exponential is limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("Lanczos did not converge in {m_max} iterations (error estimate {estimate:.3e})")]
    LanczosNotConverged { m_max: usize, estimate: f64 },

    #[error("commutator elimination requires pointwise Magnus terms (spectral model)")]
    NotPointwise,

    #[error("backend `{backend}` does not support {model} models")]
    Unsupported { backend: &'static str, model: &'static str },

    #[error("non-finite values in state")]
    NonFinite,

    #[error("step at t = {t}: {source}")]
    Step { t: f64, source: Box<Error> },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
