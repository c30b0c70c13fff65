use thiserror::Error;

/// Errors raised by the solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Array or mesh sizes do not agree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    /// A triangular or tridiagonal system has a vanishing pivot.
    #[error("singular system: {0}")]
    Singular(String),
    /// The problem or experiment description is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    /// A solve inside a refinement study failed.
    #[error("at resolution {resolution}: {source}")]
    Refinement {
        resolution: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
