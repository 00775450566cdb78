use thiserror::Error;

/// Errors raised by the matrix-analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("function is not finite at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {lambda_min} < -{tolerance}")]
    NotPsd { lambda_min: f64, tolerance: f64 },

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeError { expected: usize, found: usize },

    #[error("matrix is too close to singular: lambda_min {lambda_min}, lambda_max {lambda_max}")]
    NearSingular { lambda_min: f64, lambda_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ShapeError { expected, found })
    }
}
