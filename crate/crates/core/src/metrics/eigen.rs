//! Dense symmetric matrices and a cyclic Jacobi eigenvalue solver.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 100;

/// Square matrix kept exactly symmetric: every write is mirrored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix {
            order,
            entries: vec![T::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from the upper triangle of `rows` (the lower triangle is ignored).
    pub fn from_upper<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let order = rows.len();
        let mut m = Self::zeros(order);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), order, "matrix must be square");
            for j in i..order {
                m.set(i, j, r[j]);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.order + j] = v;
        self.entries[j * self.order + i] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// `self + shift * I`
    pub fn shifted(&self, shift: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.order {
            let v = m.get(i, i) + shift;
            m.set(i, i, v);
        }
        m
    }

    pub fn scaled(&self, factor: T) -> Self {
        SymmetricMatrix {
            order: self.order,
            entries: self.entries.iter().map(|&v| v * factor).collect(),
        }
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.order {
            for j in i..self.order {
                if !self.get(i, j).is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Frobenius norms of the off-diagonal part and of the diagonal.
    fn off_and_diag_norms(&self) -> (T, T) {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..self.order {
            let d = self.get(i, i);
            diag += d * d;
            for j in (i + 1)..self.order {
                let v = self.get(i, j);
                off += v * v;
            }
        }
        ((off + off).sqrt(), diag.sqrt())
    }
}

/// All eigenvalues of a symmetric matrix, sorted descending.
///
/// Runs cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops
/// below `T::jacobi_tolerance()` times the diagonal Frobenius norm.
pub fn eigen_spectrum<T: Scalar>(m: &SymmetricMatrix<T>) -> Result<Vec<T>> {
    m.check_finite()?;
    let mut a = m.clone();
    let n = a.order;
    let tol = T::jacobi_tolerance();
    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let (off, diag) = a.off_and_diag_norms();
        if off == T::zero() || off < tol * diag {
            converged = true;
            break;
        }
        sweep(&mut a);
    }
    if !converged {
        let (off, diag) = a.off_and_diag_norms();
        let residual = if diag > T::zero() { off / diag } else { off };
        return Err(Error::NonConvergence {
            sweeps: MAX_SWEEPS,
            residual: residual.to_f64_lossy(),
        });
    }
    let mut values: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(values)
}

/// One cyclic pass of plane rotations over every `(p, q)` with `p < q`.
fn sweep<T: Scalar>(a: &mut SymmetricMatrix<T>) {
    let n = a.order;
    let two = T::lit(2.0);
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = a.get(p, q);
            if apq == T::zero() {
                continue;
            }
            let app = a.get(p, p);
            let aqq = a.get(q, q);
            let theta = (aqq - app) / (two * apq);
            // smaller root of t^2 + 2 theta t - 1 = 0
            let t = if theta.abs() > T::max_value().sqrt() {
                T::one() / (two * theta)
            } else {
                let r = (theta * theta + T::one()).sqrt();
                let t = T::one() / (theta.abs() + r);
                if theta < T::zero() {
                    -t
                } else {
                    t
                }
            };
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;
            for r in 0..n {
                if r == p || r == q {
                    continue;
                }
                let arp = a.get(r, p);
                let arq = a.get(r, q);
                a.set(r, p, c * arp - s * arq);
                a.set(r, q, s * arp + c * arq);
            }
            a.set(p, p, app - t * apq);
            a.set(q, q, aqq + t * apq);
            a.set(p, q, T::zero());
        }
    }
}

/// Spectrum of a covariance matrix: small negative round-off (down to
/// `-T::psd_tolerance()`) is clamped to zero, anything lower is an error.
pub fn covariance_spectrum<T: Scalar>(m: &SymmetricMatrix<T>) -> Result<Vec<T>> {
    let mut values = eigen_spectrum(m)?;
    let tol = T::psd_tolerance();
    for v in &mut values {
        if *v < -tol {
            return Err(Error::NegativeEigenvalue {
                value: v.to_f64_lossy(),
            });
        }
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    Ok(values)
}
