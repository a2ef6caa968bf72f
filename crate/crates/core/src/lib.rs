//! Divergence between two groups' coping-label score matrices.
//!
//! Each group is a documents × labels matrix of scores in [0, 1]. The
//! composite score combines three components:
//!
//! - cosine distance between the groups' mean z-scored profiles,
//! - the shift between the covariance eigen-spectra, divided by `sqrt(n)`,
//! - the Euclidean distance between the mean raw profiles,
//!
//! as `harmonic_mean(cosine, shift / sqrt(n)) + euclidean`.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod config;
pub mod error;
pub mod ingest;
pub mod labels;
pub mod metrics;
pub mod model;
pub mod normalize;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod synth;

pub use config::{
    AnalysisConfig, CovarianceInput, DegenerateCosinePolicy, EigenShiftNorm, FlatConfig,
    NormalizationMode, ReportFormat,
};
pub use error::{Error, Result};
pub use ingest::{
    load_documents, load_score_matrix, read_score_matrix, validate_pair, write_atomic,
    write_score_matrix, IngestReport,
};
pub use labels::{fingerprint, CopingLabelSet, Fingerprint};
pub use model::{Document, DocumentSet, Table};
pub use pipeline::analyze;
pub use report::render;
pub use scalar::Scalar;
pub use synth::{generate, sweep, Perturbation, SynthSpec};

pub type ScoreMatrix<T = f64> = model::ScoreMatrix<T>;
pub type GroupProfile<T = f64> = model::GroupProfile<T>;
pub type GpiComponents<T = f64> = model::GpiComponents<T>;
pub type AnalysisReport<T = f64> = pipeline::AnalysisReport<T>;
pub type SymmetricMatrix<T = f64> = metrics::SymmetricMatrix<T>;
pub type ColumnStats<T = f64> = normalize::ColumnStats<T>;

pub type ScoreMatrix32 = model::ScoreMatrix<f32>;
pub type GpiComponents32 = model::GpiComponents<f32>;
pub type AnalysisReport32 = pipeline::AnalysisReport<f32>;
