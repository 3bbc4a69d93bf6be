use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator vanishes under the given bindings")]
    Pole,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("operation requires 2x2 matrices, got size {0}")]
    NotSizeTwo(usize),

    #[error("expression is not polynomial in `{0}`")]
    NotPolynomial(String),

    #[error("operator is not in D(W): {0}")]
    NonMember(String),

    #[error("operator is not central: {0}")]
    NotCentral(String),

    #[error("center decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("numeric specializations disagree: {0}")]
    SpecializationMismatch(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
