use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (dimension mismatch, bad parameter...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported game shape: {0}")]
    UnsupportedShape(String),

    /// Payoff ties make a strict classification impossible.
    #[error("degenerate game: payoff ties between cells {cells:?}")]
    Degenerate { cells: Vec<Vec<usize>> },

    #[error("integration produced a non-finite state at step {step}")]
    Integration { step: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Contract(_) | Error::UnsupportedShape(_) | Error::Config(_) | Error::Parse(_)
        )
    }
}
