use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("argument outside the admissible domain: {0}")]
    Domain(String),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("grid construction failed: {0}")]
    GridConstruction(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("inverse is not unique: {0}")]
    AmbiguousInverse(String),
    #[error("harmonic basis construction failed: {0}")]
    BasisConstruction(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("constraint solver did not converge after {iterations} iterations (residuals {residuals:?})")]
    ConstraintFailure { iterations: usize, residuals: Vec<f64> },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
