use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("bad dimensions: {0}")]
    BadDimensions(String),

    #[error("degenerate grid at row {row}, column {col}: {reason}")]
    DegenerateGrid { row: usize, col: usize, reason: String },

    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("metric perturbation is not symmetric at interior node {0}")]
    NonSymmetric(usize),

    #[error("reparameterization is not a diffeomorphism: {0}")]
    NotADiffeo(String),

    #[error("line search failed after {iterations} iterations")]
    LineSearchFailed { iterations: usize },

    #[error("unknown shape `{0}`")]
    UnknownShape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid flag file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = FlagError> = std::result::Result<T, E>;

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(FlagError::DimensionMismatch {
            what,
            expected,
            actual,
        })
    }
}
