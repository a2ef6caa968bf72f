//! End-to-end analysis of one pair of groups.

use std::cmp::Ordering;

use crate::config::{AnalysisConfig, CovarianceInput, NormalizationMode};
use crate::error::Result;
use crate::ingest::validate_pair;
use crate::labels::Fingerprint;
use crate::metrics::{
    compose_gpi, cosine_distance, covariance, covariance_spectrum, eigen_shift,
    euclidean_distance, mean_vector,
};
use crate::model::{GpiComponents, GroupProfile, ScoreMatrix};
use crate::normalize::{compute_pooled_stats, zscore, ColumnStats, ZeroedAxis};
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    /// Input paths as supplied by the caller; empty for in-memory analyses.
    pub inputs: Vec<String>,
    pub label_fingerprint: Fingerprint,
    pub config: AnalysisConfig,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport<T> {
    pub components: GpiComponents<T>,
    /// Profiles in canonical group order.
    pub profiles: (GroupProfile<T>, GroupProfile<T>),
    /// Sorted.
    pub warnings: Vec<String>,
    pub provenance: Provenance,
    /// Wall-clock stamp; the only field that may differ between identical runs.
    pub generated_at: Option<String>,
}

impl<T> AnalysisReport<T> {
    pub fn with_inputs<I, S>(mut self, inputs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.provenance.inputs = inputs.into_iter().map(Into::into).collect();
        self
    }
}

/// Orders the pair by group id, breaking ties on the scores themselves, so
/// that `analyze(a, b)` and `analyze(b, a)` perform identical arithmetic.
fn canonical_order<'m, T: Scalar>(
    a: &'m ScoreMatrix<T>,
    b: &'m ScoreMatrix<T>,
) -> (&'m ScoreMatrix<T>, &'m ScoreMatrix<T>) {
    let by_scores = || {
        a.nrows().cmp(&b.nrows()).then_with(|| {
            a.scores()
                .as_slice()
                .iter()
                .zip(b.scores().as_slice())
                .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    };
    match a.group_id().cmp(b.group_id()).then_with(by_scores) {
        Ordering::Greater => (b, a),
        _ => (a, b),
    }
}

struct GroupResult<T> {
    profile: GroupProfile<T>,
    warnings: Vec<String>,
}

fn profile_group<T: Scalar>(
    matrix: &ScoreMatrix<T>,
    config: &AnalysisConfig,
    pooled: Option<&ColumnStats<T>>,
) -> Result<GroupResult<T>> {
    let normalized = zscore(matrix, config.normalization, pooled);
    let warnings = normalized
        .zeroed
        .iter()
        .map(|&i| match config.normalization.zeroed_axis() {
            ZeroedAxis::Row => format!(
                "group {:?}: zero-variance row {:?} normalized to zeros",
                matrix.group_id(),
                matrix.doc_ids()[i]
            ),
            ZeroedAxis::Column => format!(
                "group {:?}: zero-variance column {} normalized to zeros",
                matrix.group_id(),
                i + 1
            ),
        })
        .collect();
    let cov_input = match config.covariance_input {
        CovarianceInput::Normalized => &normalized.table,
        CovarianceInput::Raw => matrix.scores(),
    };
    let eigen_spectrum = covariance_spectrum(&covariance(cov_input)?)?;
    Ok(GroupResult {
        profile: GroupProfile {
            group_id: matrix.group_id().to_string(),
            doc_count: matrix.nrows(),
            mean_raw: mean_vector(matrix.scores()),
            mean_norm: mean_vector(&normalized.table),
            eigen_spectrum,
        },
        warnings,
    })
}

/// Normalizes both groups, profiles them and composes the divergence score.
pub fn analyze<T: Scalar>(
    a: &ScoreMatrix<T>,
    b: &ScoreMatrix<T>,
    config: &AnalysisConfig,
) -> Result<AnalysisReport<T>> {
    validate_pair(a, b)?;
    config.validate()?;
    let (first, second) = canonical_order(a, b);
    let pooled = match config.normalization {
        NormalizationMode::PooledColumn => Some(compute_pooled_stats(first, second)),
        _ => None,
    };
    let (ra, rb) = rayon::join(
        || profile_group(first, config, pooled.as_ref()),
        || profile_group(second, config, pooled.as_ref()),
    );
    let (ra, rb) = (ra?, rb?);
    let (pa, pb) = (&ra.profile, &rb.profile);

    let cosine = cosine_distance(&pa.mean_norm, &pb.mean_norm, config.degenerate_cosine)?;
    let shift = eigen_shift(&pa.eigen_spectrum, &pb.eigen_spectrum, config.eigen_shift_norm)?;
    let euclidean = euclidean_distance(&pa.mean_raw, &pb.mean_raw)?;
    let components = compose_gpi(cosine, shift, euclidean, first.ncols())?
        .with_context((pa.doc_count, pb.doc_count), config.clone());

    let mut warnings: Vec<String> = ra.warnings.into_iter().chain(rb.warnings).collect();
    warnings.sort();
    Ok(AnalysisReport {
        components,
        profiles: (ra.profile, rb.profile),
        warnings,
        provenance: Provenance {
            inputs: Vec::new(),
            label_fingerprint: first.fingerprint().clone(),
            config: config.clone(),
            tool_version: TOOL_VERSION.to_string(),
        },
        generated_at: None,
    })
}
