use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index ({i}, {j}) out of range for dimension {n}")]
    Index { i: usize, j: usize, n: usize },

    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("not a state: eigenvalue {0:e} is below -1e-8")]
    NotAState(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Dimension(n))
    } else {
        Ok(())
    }
}
