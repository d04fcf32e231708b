//! Symmetric eigenvalues: Householder reduction to tridiagonal form followed
//! by Sturm-sequence bisection.

use super::matrix::{norm2, Matrix};
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n - 1.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Orthogonally similar tridiagonal form of a symmetric matrix. Only the
    /// lower triangle of `s` is read.
    pub fn from_symmetric(s: &Matrix) -> Self {
        let n = s.rows();
        let mut a = s.clone();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];

        for k in 0..n.saturating_sub(2) {
            let x = &a.column(k)[k + 1..];
            let xnorm = norm2(x);
            diag[k] = a[(k, k)];
            if xnorm == 0.0 {
                off[k] = 0.0;
                continue;
            }
            let alpha = if x[0] > 0.0 { -xnorm } else { xnorm };
            let m = n - k - 1;
            v[..m].copy_from_slice(x);
            v[0] -= alpha;
            let vnorm = norm2(&v[..m]);
            off[k] = alpha;
            if vnorm == 0.0 {
                continue;
            }
            for vi in &mut v[..m] {
                *vi /= vnorm;
            }

            // p = A22 v using the lower triangle only
            for pi in &mut p[..m] {
                *pi = 0.0;
            }
            for j in 0..m {
                let col = a.column(k + 1 + j);
                let vj = v[j];
                p[j] += col[k + 1 + j] * vj;
                for i in j + 1..m {
                    let aij = col[k + 1 + i];
                    p[i] += aij * vj;
                    p[j] += aij * v[i];
                }
            }
            let kappa: f64 = v[..m].iter().zip(&p[..m]).map(|(a, b)| a * b).sum();
            for i in 0..m {
                p[i] -= kappa * v[i];
            }
            for j in 0..m {
                let (vj, pj) = (v[j], p[j]);
                let col = a.column_mut(k + 1 + j);
                for i in j..m {
                    col[k + 1 + i] -= 2.0 * (v[i] * pj + p[i] * vj);
                }
            }
        }
        if n >= 2 {
            diag[n - 2] = a[(n - 2, n - 2)];
            off[n - 2] = a[(n - 1, n - 2)];
        }
        diag[n - 1] = a[(n - 1, n - 1)];
        Tridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn gershgorin(&self) -> (f64, f64) {
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

    fn pivmin(&self) -> f64 {
        let m = self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * m
    }

    /// Number of eigenvalues strictly less than `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let width = (hi - lo).abs().max(hi.abs()).max(lo.abs());
        lo -= 2.0 * f64::EPSILON * width + self.pivmin();
        hi += 2.0 * f64::EPSILON * width + self.pivmin();
        // invariant: λ_index ∈ (lo, hi]; a zero pivot counts as "below", so
        // count_below(x) > index exactly when λ_index <= x
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.eigenvalue(i)).collect()
    }
}

fn check_symmetric_input(s: &Matrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    s.check_finite()
}

/// Largest eigenvalue of `(S + Sᵀ)/2`. Sign is preserved.
pub fn lambda_max_symmetric(s: &Matrix) -> Result<f64> {
    check_symmetric_input(s)?;
    Ok(lambda_max_unchecked(&s.symmetrized()))
}

/// Smallest eigenvalue of `(S + Sᵀ)/2`.
pub fn lambda_min_symmetric(s: &Matrix) -> Result<f64> {
    check_symmetric_input(s)?;
    Ok(Tridiagonal::from_symmetric(&s.symmetrized()).eigenvalue(0))
}

/// All eigenvalues of `(S + Sᵀ)/2`, ascending.
pub fn symmetric_eigenvalues(s: &Matrix) -> Result<Vec<f64>> {
    check_symmetric_input(s)?;
    Ok(Tridiagonal::from_symmetric(&s.symmetrized()).eigenvalues())
}

/// λ_max of an already symmetric, finite matrix.
pub(crate) fn lambda_max_unchecked(s: &Matrix) -> f64 {
    let t = Tridiagonal::from_symmetric(s);
    t.eigenvalue(t.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_diagonal_keeps_sign() {
        let s = Matrix::from_diagonal(&[-1.0, -5.0]);
        assert_eq!(lambda_max_symmetric(&s).unwrap(), -1.0);
    }

    #[test]
    fn known_two_by_two() {
        let s = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!((lambda_max_symmetric(&s).unwrap() - 3.0).abs() < 1e-14);
        assert!((lambda_min_symmetric(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_by_one_and_not_square() {
        let s = Matrix::from_diagonal(&[4.5]);
        assert_eq!(lambda_max_symmetric(&s).unwrap(), 4.5);
        let r = Matrix::zeros(2, 3);
        assert!(matches!(
            lambda_max_symmetric(&r),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn tridiagonal_preserves_spectrum_of_laplacian() {
        // 1-D Dirichlet Laplacian, eigenvalues 2 - 2 cos(k pi / (n + 1))
        let n = 9;
        let s = Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        // scramble with a permutation similarity so the reduction has work to do
        let perm: Vec<usize> = (0..n).map(|i| (i * 4) % n).collect();
        let p = Matrix::from_fn(n, n, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
        let scrambled = p.matmul(&s).matmul(&p.transpose());
        let ev = symmetric_eigenvalues(&scrambled).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13, "{k}: {v} vs {exact}");
        }
    }

    #[test]
    fn rejects_nan() {
        let s = Matrix::from_raw(2, 2, vec![1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(
            lambda_max_symmetric(&s),
            Err(Error::NonFiniteInput { .. })
        ));
    }
}
