use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("operator is zero; norm-attaining subspace is undefined")]
    DegenerateOperator,
    #[error("no zero witness found in the numerical range within the iteration budget")]
    NoWitnessFound,
    #[error("pair is not orthogonal in the required sense")]
    NotOrthogonal,
    #[error("pair is not approximately strongly orthogonal")]
    NotApproxOrthogonal,
    #[error("direction is zero")]
    ZeroDirection,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("epsilon {0} out of range")]
    EpsOutOfRange(f64),
    #[error("element is invertible (minimum modulus {0:e})")]
    Invertible(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
