//! Shared domain types: documents, score matrices, group profiles and the
//! composite score record.

use std::collections::HashSet;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::labels::{CopingLabelSet, Fingerprint};
use crate::scalar::Scalar;

/// Scores may overshoot [0, 1] by this much and are clamped; anything
/// further out is rejected.
pub const SCORE_CLAMP_TOLERANCE: f64 = 1e-9;

/// Dense row-major matrix with a fixed column count.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<T> {
    ncols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Table<T> {
    /// # Panics
    /// If `ncols` is zero or `data.len()` is not a multiple of `ncols`.
    pub fn new(ncols: usize, data: Vec<T>) -> Self {
        assert!(ncols > 0, "table needs at least one column");
        assert_eq!(data.len() % ncols, 0, "ragged table data");
        Table { ncols, data }
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(ncols * rows.len());
        for r in rows {
            assert_eq!(r.as_ref().len(), ncols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Table::new(ncols, data)
    }

    /// Builds a table from `f64` rows, converting to the scalar type.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let converted: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| T::lit(x)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.data.len() / self.ncols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.ncols)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.ncols + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stacked(&self, other: &Table<T>) -> Table<T> {
        assert_eq!(self.ncols, other.ncols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Table::new(self.ncols, data)
    }
}

/// One group's corpus of documents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentSet {
    group_id: String,
    documents: Vec<Document>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl DocumentSet {
    pub fn new(group_id: impl Into<String>, documents: Vec<Document>) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::DocumentSet("no documents".into()));
        }
        let mut seen = HashSet::new();
        for (i, d) in documents.iter().enumerate() {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateDocId {
                    row: i + 1,
                    doc_id: d.id.clone(),
                });
            }
        }
        Ok(DocumentSet {
            group_id: group_id.into(),
            documents,
        })
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Documents × labels grid of scores in [0, 1] for one group.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix<T> {
    group_id: String,
    fingerprint: Fingerprint,
    doc_ids: Vec<String>,
    scores: Table<T>,
}

impl<T: Scalar> ScoreMatrix<T> {
    /// Validates and builds a matrix. Row numbers in errors are 1-based
    /// positions in `rows`.
    pub fn new(
        group_id: impl Into<String>,
        labels: &CopingLabelSet,
        rows: Vec<(String, Vec<T>)>,
    ) -> Result<Self> {
        let group_id = group_id.into();
        let n = labels.len();
        let mut doc_ids = Vec::with_capacity(rows.len());
        let mut data = Vec::with_capacity(rows.len() * n);
        for (i, (doc_id, scores)) in rows.into_iter().enumerate() {
            if scores.len() != n {
                return Err(Error::RowLength {
                    row: i + 1,
                    doc_id,
                    expected: n,
                    found: scores.len(),
                });
            }
            for (j, &s) in scores.iter().enumerate() {
                data.push(check_score(s, i + 1, &labels.labels()[j])?);
            }
            doc_ids.push(doc_id);
        }
        if doc_ids.len() < 2 {
            return Err(Error::InsufficientRows {
                group: group_id,
                found: doc_ids.len(),
            });
        }
        Ok(ScoreMatrix {
            group_id,
            fingerprint: labels.fingerprint().clone(),
            doc_ids,
            scores: Table::new(n, data),
        })
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn scores(&self) -> &Table<T> {
        &self.scores
    }

    pub fn nrows(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn ncols(&self) -> usize {
        self.scores.ncols()
    }

    /// Same scores under a different group id.
    pub fn with_group_id(mut self, group_id: impl Into<String>) -> Self {
        self.group_id = group_id.into();
        self
    }
}

/// Validates one score, clamping float noise within [`SCORE_CLAMP_TOLERANCE`].
pub(crate) fn check_score<T: Scalar>(s: T, row: usize, column: &str) -> Result<T> {
    if !s.is_finite() {
        return Err(Error::NonFinite {
            row,
            column: column.to_string(),
            value: s.to_f64_lossy(),
        });
    }
    let tol = T::lit(SCORE_CLAMP_TOLERANCE);
    if s < -tol || s > T::one() + tol {
        return Err(Error::OutOfRange {
            row,
            column: column.to_string(),
            value: s.to_f64_lossy(),
        });
    }
    Ok(s.max(T::zero()).min(T::one()))
}

/// Summary of one group used by the composite metric.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupProfile<T> {
    pub group_id: String,
    pub doc_count: usize,
    pub mean_raw: Vec<T>,
    pub mean_norm: Vec<T>,
    /// Covariance eigenvalues, sorted non-increasing.
    pub eigen_spectrum: Vec<T>,
}

/// Components of the composite divergence score.
#[derive(Clone, Debug, PartialEq)]
pub struct GpiComponents<T> {
    pub cosine: T,
    pub eigen_shift_raw: T,
    /// `eigen_shift_raw / sqrt(n)`; this is the value entering the harmonic mean.
    pub eigen_shift_normalized: T,
    pub euclidean: T,
    pub harmonic_mean: T,
    pub gpi_diff: T,
    pub n: usize,
    pub doc_counts: (usize, usize),
    pub config: AnalysisConfig,
}
