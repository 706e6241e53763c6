use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix data has {found} entries, expected {expected}")]
    DataLength { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("ancilla operator has trace {trace}, expected 1")]
    NotUnitTrace { trace: String },

    #[error("state is not in S_B (spectral margin {margin:e} <= {margin_tol:e})")]
    NotInSb { margin: f64, margin_tol: f64 },

    #[error("channel is not completely positive (min G eigenvalue {min_g_eig:e}); Kraus form unavailable")]
    NotCompletelyPositive { min_g_eig: f64 },

    #[error("two-qubit unitary reported Schmidt rank 3; singular values {0:?}")]
    RankThree(Vec<f64>),

    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not a SIC fiducial (max overlap error {0:e})")]
    NotFiducial(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
