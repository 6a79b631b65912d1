use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported local dimension {0}")]
    UnsupportedDimension(usize),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("matrix is singular")]
    Singular,
    #[error("determinant {0} differs from 1")]
    DeterminantNotOne(num_complex::Complex64),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("unknown invariant label {0:?}")]
    UnknownLabel(String),
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    SymFunc(#[from] schurfn::SymFuncError),
    #[error("state file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
