//! Z-score normalization of score matrices.
//!
//! Three axes are supported. Only [`NormalizationMode::RowWise`] keeps the
//! cosine between group means informative: per-group column scaling makes
//! each group's mean exactly zero, and pooled column scaling makes the two
//! group means antiparallel (`n_a * m_a + n_b * m_b = 0`).
//!
//! All modes use the population standard deviation. A row or column with
//! zero variance maps to zeros and is recorded in [`Normalized::zeroed`].

use rayon::prelude::*;

use crate::config::NormalizationMode;
use crate::model::{ScoreMatrix, Table};
use crate::scalar::Scalar;

/// Per-column mean and population standard deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnStats<T> {
    pub means: Vec<T>,
    pub stdevs: Vec<T>,
}

/// A z-scored table plus the rows (or columns) that had zero variance.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized<T> {
    pub table: Table<T>,
    /// Row indices for [`NormalizationMode::RowWise`], column indices otherwise.
    pub zeroed: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroedAxis {
    Row,
    Column,
}

impl NormalizationMode {
    pub fn zeroed_axis(self) -> ZeroedAxis {
        match self {
            NormalizationMode::RowWise => ZeroedAxis::Row,
            _ => ZeroedAxis::Column,
        }
    }
}

/// Normalizes a score matrix.
///
/// # Panics
/// If `pooled` is supplied with a mode other than `PooledColumn`, or missing
/// for `PooledColumn`.
pub fn zscore<T: Scalar>(
    matrix: &ScoreMatrix<T>,
    mode: NormalizationMode,
    pooled: Option<&ColumnStats<T>>,
) -> Normalized<T> {
    zscore_table(matrix.scores(), mode, pooled)
}

/// Same as [`zscore`] on an unvalidated table; entries may be any finite reals.
pub fn zscore_table<T: Scalar>(
    table: &Table<T>,
    mode: NormalizationMode,
    pooled: Option<&ColumnStats<T>>,
) -> Normalized<T> {
    match (mode, pooled) {
        (NormalizationMode::RowWise, None) => zscore_rows(table),
        (NormalizationMode::PerGroupColumn, None) => {
            zscore_columns(table, &column_stats(table))
        }
        (NormalizationMode::PooledColumn, Some(stats)) => zscore_columns(table, stats),
        (NormalizationMode::PooledColumn, None) => {
            panic!("pooled-column normalization needs pooled statistics")
        }
        (_, Some(_)) => panic!("pooled statistics supplied for {mode} normalization"),
    }
}

/// Mean and population SD of a slice.
fn mean_sd<T: Scalar>(values: &[T]) -> (T, T) {
    let count = T::from_usize(values.len()).expect("length fits scalar");
    let mean = values.iter().copied().sum::<T>() / count;
    let var = values
        .iter()
        .map(|&x| {
            let d = x - mean;
            d * d
        })
        .sum::<T>()
        / count;
    (mean, var.sqrt())
}

/// Standard deviations at or below this (relative to the scale of the data)
/// are treated as zero variance.
fn is_degenerate<T: Scalar>(sd: T, mean: T) -> bool {
    sd <= T::epsilon() * T::lit(8.0) * mean.abs().max(T::one())
}

fn zscore_rows<T: Scalar>(table: &Table<T>) -> Normalized<T> {
    let n = table.ncols();
    let rows: Vec<(Vec<T>, bool)> = table
        .as_slice()
        .par_chunks_exact(n)
        .map(|row| {
            let (mean, sd) = mean_sd(row);
            if is_degenerate(sd, mean) {
                (vec![T::zero(); n], true)
            } else {
                (row.iter().map(|&x| (x - mean) / sd).collect(), false)
            }
        })
        .collect();
    let mut data = Vec::with_capacity(table.as_slice().len());
    let mut zeroed = Vec::new();
    for (i, (row, degenerate)) in rows.into_iter().enumerate() {
        data.extend(row);
        if degenerate {
            zeroed.push(i);
        }
    }
    Normalized {
        table: Table::new(n, data),
        zeroed,
    }
}

fn zscore_columns<T: Scalar>(table: &Table<T>, stats: &ColumnStats<T>) -> Normalized<T> {
    let n = table.ncols();
    assert_eq!(stats.means.len(), n, "column stats dimension");
    let degenerate: Vec<bool> = stats
        .means
        .iter()
        .zip(&stats.stdevs)
        .map(|(&m, &s)| is_degenerate(s, m))
        .collect();
    let mut data = Vec::with_capacity(table.as_slice().len());
    for row in table.rows() {
        data.extend(row.iter().enumerate().map(|(j, &x)| {
            if degenerate[j] {
                T::zero()
            } else {
                (x - stats.means[j]) / stats.stdevs[j]
            }
        }));
    }
    Normalized {
        table: Table::new(n, data),
        zeroed: (0..n).filter(|&j| degenerate[j]).collect(),
    }
}

/// Per-column mean and population SD of one table.
pub fn column_stats<T: Scalar>(table: &Table<T>) -> ColumnStats<T> {
    let n = table.ncols();
    let count = T::from_usize(table.nrows()).expect("row count fits scalar");
    let mut means = vec![T::zero(); n];
    for row in table.rows() {
        for (m, &x) in means.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= count;
    }
    let mut vars = vec![T::zero(); n];
    for row in table.rows() {
        for ((v, &x), &m) in vars.iter_mut().zip(row).zip(&means) {
            let d = x - m;
            *v += d * d;
        }
    }
    let stdevs = vars.into_iter().map(|v| (v / count).sqrt()).collect();
    ColumnStats { means, stdevs }
}

/// Column statistics over the rows of `a` followed by the rows of `b`.
pub fn compute_pooled_stats<T: Scalar>(a: &ScoreMatrix<T>, b: &ScoreMatrix<T>) -> ColumnStats<T> {
    pooled_table_stats(a.scores(), b.scores())
}

pub fn pooled_table_stats<T: Scalar>(a: &Table<T>, b: &Table<T>) -> ColumnStats<T> {
    column_stats(&a.stacked(b))
}
