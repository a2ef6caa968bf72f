use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid label set: {0}")]
    LabelSet(String),

    #[error("invalid document set: {0}")]
    DocumentSet(String),

    #[error("{path}: zero valid rows")]
    ZeroValidRows { path: PathBuf },

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("label order mismatch: header column {column} is {found:?}, label set expects {expected:?}")]
    LabelOrderMismatch {
        column: usize,
        expected: String,
        found: String,
    },

    #[error("row {row} (doc {doc_id:?}): expected {expected} scores, found {found}")]
    RowLength {
        row: usize,
        doc_id: String,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column:?}: non-numeric value {value:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}, column {column:?}: non-finite score {value}")]
    NonFinite {
        row: usize,
        column: String,
        value: f64,
    },

    #[error("row {row}, column {column:?}: score {value} outside [0, 1]")]
    OutOfRange {
        row: usize,
        column: String,
        value: f64,
    },

    #[error("row {row}: duplicate doc_id {doc_id:?}")]
    DuplicateDocId { row: usize, doc_id: String },

    #[error("insufficient rows in group {group:?}: {found} (need at least 2)")]
    InsufficientRows { group: String, found: usize },

    #[error("{path}: {count} rejected row(s); first at line {line}: {reason}")]
    RejectedRows {
        path: PathBuf,
        count: usize,
        line: usize,
        reason: String,
    },

    #[error("label-set fingerprint mismatch: {left} vs {right}")]
    FingerprintMismatch { left: String, right: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("label dimension must be positive, got {0}")]
    InvalidDimension(usize),

    #[error("degenerate cosine: {0}")]
    DegenerateCosine(&'static str),

    #[error("negative input to {name}: {value}")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("spectrum is not sorted in descending order")]
    UnsortedSpectrum,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("covariance spectrum has eigenvalue {value:e} below tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("adapter error: {0}")]
    Adapter(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the command-line front end.
    ///
    /// 1: validation or input error, 2: numerical failure, 3: configuration error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. }
            | Error::NegativeEigenvalue { .. }
            | Error::NonFiniteEntry { .. }
            | Error::DegenerateCosine(_) => 2,
            Error::Config(_) => 3,
            _ => 1,
        }
    }
}
