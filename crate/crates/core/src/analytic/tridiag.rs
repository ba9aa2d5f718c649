//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for selected
//! eigenvalues and inverse iteration for their eigenvectors.
//!
//! Only the lowest part of the spectrum (or a window around a shift) is ever
//! needed, so nothing here forms a dense matrix. For zero-diagonal matrices
//! (the Golub–Kahan form the mode operators take) Sturm counts near zero are
//! accurate relative to the eigenvalue, which is what lets the kernel test
//! resolve exact zeros against a tolerance far below `eps * ||T||`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("inverse iteration did not converge for eigenvalue {value:e} (residual {residual:e})")]
    NotConverged { value: f64, residual: f64 },
    #[error("eigenvalue index {index} out of range for a matrix of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("matrix is empty")]
    Empty,
}

/// Symmetric tridiagonal matrix: `diag[i]` on the diagonal, `off[i]` at
/// positions `(i, i+1)` and `(i+1, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiag {
    /// Panics if `off.len() + 1 != diag.len()` for non-empty `diag`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            diag.is_empty() && off.is_empty() || off.len() + 1 == diag.len(),
            "off-diagonal length must be one less than the diagonal"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count of the LDLᵀ
    /// pivots of `T - xI`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0_f64;
        for i in 0..self.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = if i == 0 {
                self.diag[0] - x
            } else if d.is_infinite() {
                self.diag[i] - x
            } else {
                self.diag[i] - x - b2 / d
            };
            if d == 0.0 {
                // Perturb an exact zero pivot; the count is unaffected for x
                // not equal to an eigenvalue.
                d = -f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of eigenvalues in the half-open interval `[a, b)`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        self.count_below(b).saturating_sub(self.count_below(a))
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection, to absolute
    /// accuracy `abs_tol` or relative accuracy of a few ulps, whichever is
    /// reached first.
    pub fn eigenvalue(&self, k: usize, abs_tol: f64) -> Result<f64, EigenError> {
        let n = self.len();
        if n == 0 {
            return Err(EigenError::Empty);
        }
        if k >= n {
            return Err(EigenError::IndexOutOfRange { index: k, size: n });
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..2100 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= abs_tol.max(4.0 * f64::EPSILON * lo.abs().max(hi.abs())) {
                break;
            }
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize, abs_tol: f64) -> Result<Vec<f64>, EigenError> {
        (0..k).map(|i| self.eigenvalue(i, abs_tol)).collect()
    }

    /// Solve `(T - shift I) x = rhs` by Gaussian elimination with partial
    /// pivoting. Exactly zero pivots are replaced by `eps * ||T||` so the
    /// solve stays finite at an eigenvalue.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let norm = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let tiny = f64::EPSILON * norm;
        // Row i holds columns i, i+1, i+2 after elimination (u0, u1, u2).
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut b = rhs.to_vec();
        // Current row being eliminated: (a, c) on columns (i, i+1) plus the
        // next row's sub-diagonal entry.
        let mut cur_d = if n > 0 { self.diag[0] - shift } else { 0.0 };
        let mut cur_u = if n > 1 { self.off[0] } else { 0.0 };
        let mut cur_u2 = 0.0;
        for i in 0..n {
            if i + 1 < n {
                let sub = self.off[i];
                let nd = self.diag[i + 1] - shift;
                let nu = if i + 2 < n { self.off[i + 1] } else { 0.0 };
                if sub.abs() > cur_d.abs() {
                    // Swap rows i and i+1.
                    u0[i] = sub;
                    u1[i] = nd;
                    u2[i] = nu;
                    b.swap(i, i + 1);
                    let m = cur_d / sub;
                    b[i + 1] -= m * b[i];
                    cur_d = cur_u - m * nd;
                    cur_u = cur_u2 - m * nu;
                    cur_u2 = 0.0;
                } else {
                    let piv = if cur_d == 0.0 { tiny } else { cur_d };
                    u0[i] = piv;
                    u1[i] = cur_u;
                    u2[i] = cur_u2;
                    let m = sub / piv;
                    b[i + 1] -= m * b[i];
                    cur_d = nd - m * cur_u;
                    cur_u = nu - m * cur_u2;
                    cur_u2 = 0.0;
                }
            } else {
                u0[i] = if cur_d == 0.0 { tiny } else { cur_d };
                u1[i] = cur_u;
                u2[i] = cur_u2;
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
        }
        x
    }

    /// Eigenvector for an eigenvalue estimate `value` by inverse iteration,
    /// kept orthogonal to `against` (previously found vectors of the same
    /// cluster). Returned with unit Euclidean norm.
    pub fn eigenvector(
        &self,
        value: f64,
        against: &[Vec<f64>],
        residual_tol: f64,
    ) -> Result<Vec<f64>, EigenError> {
        let n = self.len();
        if n == 0 {
            return Err(EigenError::Empty);
        }
        // Deterministic, non-symmetric start vector.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract())
            .collect();
        orthonormalize(&mut x, against);
        let mut residual = f64::INFINITY;
        for _ in 0..8 {
            let mut y = self.shifted_solve(value, &x);
            orthonormalize(&mut y, against);
            x = y;
            let tx = self.matvec(&x);
            let rq: f64 = tx.iter().zip(&x).map(|(a, b)| a * b).sum();
            residual = tx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - rq * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= residual_tol {
                return Ok(x);
            }
        }
        Err(EigenError::NotConverged { value, residual })
    }
}

fn orthonormalize(x: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in against {
            let dot: f64 = x.iter().zip(q).map(|(a, b)| a * b).sum();
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi -= dot * qi;
            }
        }
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
}

/// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}
