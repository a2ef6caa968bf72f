//! Coping-expression label sets and their content fingerprints.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// The 27 coping expressions shipped as the default label set, in table order.
pub const DEFAULT_LABELS: [&str; 27] = [
    "Hedging",
    "Overapologizing",
    "Self-deprecation",
    "Rigid speech",
    "Passive voice",
    "Overcompensation",
    "Deflecting",
    "Generalizing",
    "Boasting",
    "Negative self-talk",
    "Hiding identity",
    "Isolation narrative",
    "Disillusionment",
    "Hopelessness",
    "Cynicism",
    "Resignation",
    "Confusion",
    "Silencing self",
    "Numbness",
    "Emotional fatigue",
    "Dismissal",
    "Appeasing language",
    "Intellectualizing",
    "Disengagement",
    "Dismissiveness",
    "Derision",
    "Denial or Deflection",
];

/// Hex digest identifying an ordered label set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered, unique coping labels. Its length is the dimension `n` of every
/// score vector in an analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopingLabelSet {
    labels: Vec<String>,
    fingerprint: Fingerprint,
}

impl CopingLabelSet {
    /// Builds a label set. Labels are trimmed; they must be non-empty and unique
    /// under case-folding, and there must be at least two.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = labels
            .into_iter()
            .map(|l| l.as_ref().trim().to_string())
            .collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::LabelSet(format!("label {} is empty", i + 1)));
            }
            if !seen.insert(label.to_lowercase()) {
                return Err(Error::LabelSet(format!("duplicate label {label:?}")));
            }
        }
        if labels.len() < 2 {
            return Err(Error::LabelSet(format!(
                "need at least 2 labels, got {}",
                labels.len()
            )));
        }
        let fingerprint = fingerprint(&labels);
        Ok(CopingLabelSet {
            labels,
            fingerprint,
        })
    }

    pub fn default_set() -> Self {
        Self::new(DEFAULT_LABELS).expect("bundled label set is valid")
    }

    /// Reads one label per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// One label per line, suitable for [`CopingLabelSet::parse`].
    pub fn to_file_contents(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// 16-hex-character digest over the ordered label names.
///
/// Each label is length-prefixed before hashing, so no two distinct ordered
/// sequences share an input byte stream.
pub fn fingerprint<S: AsRef<str>>(labels: &[S]) -> Fingerprint {
    let mut hasher = Sha256::new();
    hasher.update(b"gpidiff-labels-v1");
    for label in labels {
        let bytes = label.as_ref().as_bytes();
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    }
    let digest = hasher.finalize();
    Fingerprint(digest[..8].iter().map(|b| format!("{b:02x}")).collect())
}
