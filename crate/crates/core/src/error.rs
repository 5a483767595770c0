use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("size {size} exceeds the configured cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("row oracle broke its contract at row {row}: {reason}")]
    OracleContract { row: usize, reason: String },
    #[error("matrix is not Hermitian at ({row}, {col}): defect {defect:e}")]
    NotHermitian { row: usize, col: usize, defect: f64 },
    #[error("matrix is not unitary: column defect {col_defect:e}, row defect {row_defect:e}")]
    NotUnitary { col_defect: f64, row_defect: f64 },
    #[error("dilation is not involutory (H^2 != I); the closed-form evolution does not apply")]
    NotInvolutory,
    #[error("residual amplitude {residual:e} in the input block exceeds {threshold:e}")]
    Leakage { residual: f64, threshold: f64 },
    #[error("required repetition count {required} exceeds the cap {cap}")]
    RepetitionCap { required: u64, cap: u64 },
    #[error("transition rule: {0}")]
    InvalidRule(String),
    #[error("transition amplitudes out of ({state}, {symbol}) have squared norm {norm_sqr}, expected 1")]
    UnnormalizedRule { state: String, symbol: String, norm_sqr: f64 },
    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("{relation} relation fails for j={j}, k={k}: residual {residual:e}")]
    RelationFailure { relation: &'static str, j: usize, k: usize, residual: f64 },
    #[error("norm deviation {deviation:e} exceeds the truncation bound {bound:e}")]
    BoundViolated { deviation: f64, bound: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
