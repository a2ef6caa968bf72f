//! Independent reference computations used to check the library.
//!
//! Nothing here calls into the library's numeric routines.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric matrix with entries in [-1, 1], as full rows.
pub fn random_symmetric(rng: &mut ChaCha8Rng, order: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; order]; order];
    for i in 0..order {
        for j in i..order {
            let v = rng.random_range(-1.0..=1.0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns (diagonal, sub-diagonal).
pub fn tridiagonalize(a: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum();
        if alpha_sq == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let alpha = if x0 >= 0.0 { -alpha_sq.sqrt() } else { alpha_sq.sqrt() };
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[i][k];
        }
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // A <- H A H with H = I - 2 v v^T / (v^T v)
        let p: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<f64>() * 2.0 / vnorm_sq)
            .collect();
        let kappa: f64 = (0..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm_sq;
        let q: Vec<f64> = (0..n).map(|i| p[i] - kappa * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] -= v[i] * q[j] + q[i] * v[j];
            }
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (1..n).map(|i| a[i][i - 1]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`,
/// from the sign changes of its characteristic-polynomial sequence.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric matrix, descending, by bisection on the
/// characteristic polynomial of its tridiagonal form.
pub fn eigenvalues_by_bisection(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let (d, e) = tridiagonalize(a);
    let mut radius = 0.0f64;
    let mut center_lo = f64::INFINITY;
    let mut center_hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { e[i - 1].abs() } else { 0.0 })
            + (if i + 1 < n { e[i].abs() } else { 0.0 });
        radius = radius.max(r);
        center_lo = center_lo.min(d[i] - r);
        center_hi = center_hi.max(d[i] + r);
    }
    let (lo0, hi0) = (center_lo - 1e-9, center_hi + 1e-9);
    let mut values: Vec<f64> = (0..n)
        .map(|k| {
            // k-th smallest: the least x with count(x) > k
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&d, &e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    values.reverse();
    values
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// Column means by naive summation.
pub fn column_means(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows[0].len();
    (0..n)
        .map(|j| {
            let mut s = 0.0;
            for r in rows {
                s += r[j];
            }
            s / rows.len() as f64
        })
        .collect()
}

/// Two-pass column mean and population SD.
pub fn two_pass_stats(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let means = column_means(rows);
    let sds = (0..means.len())
        .map(|j| {
            let ss: f64 = rows.iter().map(|r| (r[j] - means[j]).powi(2)).sum();
            (ss / rows.len() as f64).sqrt()
        })
        .collect();
    (means, sds)
}

/// Population covariance by an explicit double loop over column pairs.
pub fn covariance_double_loop(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let means = column_means(rows);
    let n = means.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for r in rows {
                s += (r[i] - means[i]) * (r[j] - means[j]);
            }
            c[i][j] = s / rows.len() as f64;
        }
    }
    c
}

/// Euclidean distance summing squared differences in ascending magnitude
/// with Kahan compensation.
pub fn euclidean_compensated(a: &[f64], b: &[f64]) -> f64 {
    let mut sq: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect();
    sq.sort_by(f64::total_cmp);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in sq {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum.sqrt()
}

/// Row z-score straight from the definition.
pub fn row_zscore(row: &[f64]) -> Vec<f64> {
    let n = row.len() as f64;
    let mean = row.iter().sum::<f64>() / n;
    let sd = (row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd == 0.0 {
        return vec![0.0; row.len()];
    }
    row.iter().map(|x| (x - mean) / sd).collect()
}
