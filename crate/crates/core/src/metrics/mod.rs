//! Divergence components and their composition into the GPI-Diff score.

pub mod eigen;

pub use eigen::{covariance_spectrum, eigen_spectrum, SymmetricMatrix};

use crate::config::{AnalysisConfig, DegenerateCosinePolicy, EigenShiftNorm};
use crate::error::{Error, Result};
use crate::model::{GpiComponents, Table};
use crate::scalar::Scalar;

/// Norms below this are treated as zero by [`cosine_distance`].
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Per-column arithmetic mean.
///
/// # Panics
/// If the table has no rows.
pub fn mean_vector<T: Scalar>(table: &Table<T>) -> Vec<T> {
    assert!(table.nrows() > 0, "mean of an empty table");
    let mut sums = vec![T::zero(); table.ncols()];
    for row in table.rows() {
        for (s, &x) in sums.iter_mut().zip(row) {
            *s += x;
        }
    }
    let count = T::from_usize(table.nrows()).expect("row count fits scalar");
    sums.into_iter().map(|s| s / count).collect()
}

fn check_lengths<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn squared_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>()
}

/// `1 - cos(a, b)`, clamped to `[0, 2]`.
///
/// With `ZeroDistance`, two near-zero vectors are at distance 0; one
/// near-zero vector against a non-zero one is still an error.
pub fn cosine_distance<T: Scalar>(a: &[T], b: &[T], policy: DegenerateCosinePolicy) -> Result<T> {
    check_lengths(a, b)?;
    let (sa, sb) = (squared_norm(a), squared_norm(b));
    let (na, nb) = (sa.sqrt(), sb.sqrt());
    let eps = T::lit(DEGENERATE_NORM);
    let (da, db) = (na < eps, nb < eps);
    if da || db {
        return match policy {
            DegenerateCosinePolicy::ZeroDistance if da && db => Ok(T::zero()),
            DegenerateCosinePolicy::ZeroDistance => Err(Error::DegenerateCosine(
                "only one of the two mean vectors has zero norm",
            )),
            DegenerateCosinePolicy::Error => {
                Err(Error::DegenerateCosine("mean vector has zero norm"))
            }
        };
    }
    let dot: T = a.iter().zip(b).map(|(&x, &y)| x * y).sum();
    let d = T::one() - dot / (sa * sb).sqrt();
    Ok(d.max(T::zero()).min(T::lit(2.0)))
}

pub fn euclidean_distance<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    check_lengths(a, b)?;
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            d * d
        })
        .sum::<T>()
        .sqrt())
}

/// Population covariance of the columns (divides by the row count).
pub fn covariance<T: Scalar>(table: &Table<T>) -> Result<SymmetricMatrix<T>> {
    if table.nrows() < 2 {
        return Err(Error::InsufficientRows {
            group: String::new(),
            found: table.nrows(),
        });
    }
    let n = table.ncols();
    let means = mean_vector(table);
    let mut acc = vec![T::zero(); n * n];
    let mut centered = vec![T::zero(); n];
    for row in table.rows() {
        for ((c, &x), &m) in centered.iter_mut().zip(row).zip(&means) {
            *c = x - m;
        }
        for i in 0..n {
            let ci = centered[i];
            for j in i..n {
                acc[i * n + j] += ci * centered[j];
            }
        }
    }
    let count = T::from_usize(table.nrows()).expect("row count fits scalar");
    let mut cov = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            cov.set(i, j, acc[i * n + j] / count);
        }
    }
    Ok(cov)
}

/// Aggregate difference between two descending spectra.
pub fn eigen_shift<T: Scalar>(a: &[T], b: &[T], norm: EigenShiftNorm) -> Result<T> {
    check_lengths(a, b)?;
    for s in [a, b] {
        if s.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::UnsortedSpectrum);
        }
    }
    let diffs = a.iter().zip(b).map(|(&x, &y)| (x - y).abs());
    Ok(match norm {
        EigenShiftNorm::L1 => diffs.sum(),
        EigenShiftNorm::L2 => diffs.map(|d| d * d).sum::<T>().sqrt(),
    })
}

fn check_non_negative<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v < T::zero() || v.is_nan() {
        return Err(Error::NegativeInput {
            name,
            value: v.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `2ab / (a + b)`, or 0 when `a + b < 1e-15`.
pub fn harmonic_mean<T: Scalar>(a: T, b: T) -> Result<T> {
    check_non_negative("harmonic_mean", a)?;
    check_non_negative("harmonic_mean", b)?;
    let sum = a + b;
    if sum < T::lit(1e-15) {
        return Ok(T::zero());
    }
    Ok(T::lit(2.0) * a * b / sum)
}

/// Combines the three components.
///
/// The eigen shift is divided by `sqrt(n)` before entering the harmonic mean
/// with the cosine distance; the Euclidean distance is added to that mean.
/// `doc_counts` and `config` are left at their defaults; see
/// [`GpiComponents::with_context`].
pub fn compose_gpi<T: Scalar>(
    cosine: T,
    eigen_shift_raw: T,
    euclidean: T,
    n: usize,
) -> Result<GpiComponents<T>> {
    check_non_negative("compose_gpi (cosine)", cosine)?;
    check_non_negative("compose_gpi (eigen shift)", eigen_shift_raw)?;
    check_non_negative("compose_gpi (euclidean)", euclidean)?;
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    let root_n = T::from_usize(n).expect("n fits scalar").sqrt();
    let eigen_shift_normalized = eigen_shift_raw / root_n;
    let harmonic_mean = harmonic_mean(cosine, eigen_shift_normalized)?;
    Ok(GpiComponents {
        cosine,
        eigen_shift_raw,
        eigen_shift_normalized,
        euclidean,
        harmonic_mean,
        gpi_diff: harmonic_mean + euclidean,
        n,
        doc_counts: (0, 0),
        config: AnalysisConfig::default(),
    })
}

impl<T: Scalar> GpiComponents<T> {
    pub fn with_context(mut self, doc_counts: (usize, usize), config: AnalysisConfig) -> Self {
        self.doc_counts = doc_counts;
        self.config = config;
        self
    }
}
