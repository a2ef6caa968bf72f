//! Loading documents and score matrices from local files.
//!
//! Document files hold one JSON record per line with string fields `id` and
//! `text`; extra keys are ignored. Score matrices are UTF-8 CSV with header
//! `doc_id,<label_1>,...,<label_n>`.
//!
//! Row-level problems are skipped and recorded in an [`IngestReport`];
//! structural problems (unreadable file, bad header) abort.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::labels::{fingerprint, CopingLabelSet};
use crate::model::{check_score, Document, DocumentSet, ScoreMatrix};
use crate::scalar::Scalar;

/// Fractional digits written for every score.
pub const SCORE_DIGITS: usize = 9;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rows_rejected: usize,
    /// `(1-based line number, reason)` per rejected row.
    pub rejection_reasons: Vec<(usize, String)>,
}

impl IngestReport {
    fn reject(&mut self, line: usize, reason: impl Into<String>) {
        self.rows_rejected += 1;
        self.rejection_reasons.push((line, reason.into()));
    }

    pub fn is_clean(&self) -> bool {
        self.rows_rejected == 0
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rows read: {}, rows rejected: {}",
            self.rows_read, self.rows_rejected
        )?;
        for (line, reason) in &self.rejection_reasons {
            writeln!(f, "  line {line}: {reason}")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct DocumentRecord {
    id: String,
    text: String,
}

/// Loads a line-delimited document file. Blank lines are ignored.
pub fn load_documents(
    path: impl AsRef<Path>,
    group_id: impl Into<String>,
) -> Result<(DocumentSet, IngestReport)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    let mut documents = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        report.rows_read += 1;
        let record: DocumentRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                report.reject(line_no, format!("malformed record: {e}"));
                continue;
            }
        };
        if record.id.is_empty() {
            report.reject(line_no, "empty doc_id");
            continue;
        }
        if !seen.insert(record.id.clone()) {
            report.reject(line_no, format!("duplicate doc_id {:?}", record.id));
            continue;
        }
        documents.push(Document {
            id: record.id,
            text: record.text,
        });
    }
    if documents.is_empty() {
        return Err(Error::ZeroValidRows {
            path: path.to_path_buf(),
        });
    }
    Ok((DocumentSet::new(group_id, documents)?, report))
}

/// Group id derived from a file path: its stem, or the whole path if it has none.
pub fn group_id_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads a score matrix, rejecting the file if any row was rejected.
///
/// The group id is the file stem.
pub fn load_score_matrix<T: Scalar>(
    path: impl AsRef<Path>,
    labels: &CopingLabelSet,
) -> Result<ScoreMatrix<T>> {
    let path = path.as_ref();
    let (matrix, report) = read_score_matrix(path, labels)?;
    if let Some((line, reason)) = report.rejection_reasons.first() {
        return Err(Error::RejectedRows {
            path: path.to_path_buf(),
            count: report.rows_rejected,
            line: *line,
            reason: reason.clone(),
        });
    }
    matrix
}

/// Reads a score matrix, skipping malformed rows.
///
/// The outer `Result` fails only on structural problems. The inner one holds
/// the matrix built from the surviving rows, or why none could be built.
pub fn read_score_matrix<T: Scalar>(
    path: impl AsRef<Path>,
    labels: &CopingLabelSet,
) -> Result<(Result<ScoreMatrix<T>>, IngestReport)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_score_matrix(&bytes, group_id_from_path(path), labels, path)
}

fn parse_score_matrix<T: Scalar>(
    bytes: &[u8],
    group_id: String,
    labels: &CopingLabelSet,
    path: &Path,
) -> Result<(Result<ScoreMatrix<T>>, IngestReport)> {
    let zero_rows = || Error::ZeroValidRows {
        path: path.to_path_buf(),
    };
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(zero_rows());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| Error::HeaderMismatch(format!("unreadable header: {e}")))?
        .clone();
    check_header(&header, labels)?;

    let n = labels.len();
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    let mut rows: Vec<(String, Vec<T>)> = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line() as usize;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                report.rows_read += 1;
                report.reject(line, format!("unreadable row: {e}"));
                continue;
            }
        }
        let line = record.position().map_or(line, |p| p.line() as usize);
        report.rows_read += 1;
        if record.len() != n + 1 {
            report.reject(
                line,
                format!("expected {} fields, found {}", n + 1, record.len()),
            );
            continue;
        }
        let doc_id = record[0].trim().to_string();
        if doc_id.is_empty() {
            report.reject(line, "empty doc_id");
            continue;
        }
        match parse_scores::<T>(&record, labels, line) {
            Ok(scores) => {
                if !seen.insert(doc_id.clone()) {
                    report.reject(line, format!("duplicate doc_id {doc_id:?}"));
                    continue;
                }
                rows.push((doc_id, scores));
            }
            Err(e) => report.reject(line, e.to_string()),
        }
    }
    let matrix = if rows.is_empty() {
        Err(zero_rows())
    } else {
        ScoreMatrix::new(group_id, labels, rows)
    };
    Ok((matrix, report))
}

fn check_header(header: &csv::StringRecord, labels: &CopingLabelSet) -> Result<()> {
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names.first().copied() != Some("doc_id") {
        return Err(Error::HeaderMismatch(format!(
            "first column must be \"doc_id\", found {:?}",
            names.first().copied().unwrap_or("")
        )));
    }
    let columns = &names[1..];
    if columns.len() != labels.len() {
        return Err(Error::HeaderMismatch(format!(
            "label-set fingerprint mismatch: header {} ({} labels) vs label set {} ({} labels)",
            fingerprint(columns),
            columns.len(),
            labels.fingerprint(),
            labels.len()
        )));
    }
    let expected: HashSet<&str> = labels.labels().iter().map(String::as_str).collect();
    let found: HashSet<&str> = columns.iter().copied().collect();
    if expected != found {
        let mut unknown: Vec<&str> = found.difference(&expected).copied().collect();
        unknown.sort_unstable();
        return Err(Error::HeaderMismatch(format!(
            "label-set fingerprint mismatch: header {} vs label set {} (unknown labels: {})",
            fingerprint(columns),
            labels.fingerprint(),
            unknown.join(", ")
        )));
    }
    for (i, (found, expected)) in columns.iter().zip(labels.labels()).enumerate() {
        if found != expected {
            return Err(Error::LabelOrderMismatch {
                column: i + 2,
                expected: expected.clone(),
                found: found.to_string(),
            });
        }
    }
    Ok(())
}

fn parse_scores<T: Scalar>(
    record: &csv::StringRecord,
    labels: &CopingLabelSet,
    line: usize,
) -> Result<Vec<T>> {
    record
        .iter()
        .skip(1)
        .zip(labels.labels())
        .map(|(cell, label)| {
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row: line,
                column: label.clone(),
                value: cell.to_string(),
            })?;
            let value = T::from_f64(value).ok_or_else(|| Error::NonNumeric {
                row: line,
                column: label.clone(),
                value: cell.to_string(),
            })?;
            check_score(value, line, label)
        })
        .collect()
}

/// Both matrices must come from the same label set and have at least 2 rows.
pub fn validate_pair<T: Scalar>(a: &ScoreMatrix<T>, b: &ScoreMatrix<T>) -> Result<()> {
    if a.fingerprint() != b.fingerprint() {
        return Err(Error::FingerprintMismatch {
            left: a.fingerprint().to_string(),
            right: b.fingerprint().to_string(),
        });
    }
    for m in [a, b] {
        if m.nrows() < 2 {
            return Err(Error::InsufficientRows {
                group: m.group_id().to_string(),
                found: m.nrows(),
            });
        }
    }
    Ok(())
}

/// Serializes a matrix in the interchange CSV format.
pub fn score_matrix_csv<T: Scalar>(matrix: &ScoreMatrix<T>, labels: &CopingLabelSet) -> Vec<u8> {
    assert_eq!(
        matrix.fingerprint(),
        labels.fingerprint(),
        "matrix written with a foreign label set"
    );
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["doc_id".to_string()];
    header.extend(labels.labels().iter().cloned());
    writer.write_record(&header).expect("in-memory write");
    for (doc_id, row) in matrix.doc_ids().iter().zip(matrix.scores().rows()) {
        let mut record = Vec::with_capacity(row.len() + 1);
        record.push(doc_id.clone());
        record.extend(
            row.iter()
                .map(|v| format!("{:.*}", SCORE_DIGITS, v.to_f64_lossy())),
        );
        writer.write_record(&record).expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_score_matrix<T: Scalar>(
    path: impl AsRef<Path>,
    matrix: &ScoreMatrix<T>,
    labels: &CopingLabelSet,
) -> Result<()> {
    write_atomic(path, &score_matrix_csv(matrix, labels))
}
