//! One-sided (Hestenes) Jacobi SVD and the quantities derived from it.

use serde::{Deserialize, Serialize};

use super::eigen::lambda_max_unchecked;
use super::matrix::{dot, norm2, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Wraps values that must already be sorted descending and non-negative.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("empty singular spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidConfig(
                "singular values must be finite and non-negative".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidConfig(
                "singular values must be non-increasing".into(),
            ));
        }
        Ok(SingularSpectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    /// Number of singular values above `rel_cutoff * σ_1`.
    pub fn numerical_rank(&self, rel_cutoff: f64) -> usize {
        let s1 = self.largest();
        if s1 == 0.0 {
            return 0;
        }
        self.values.iter().filter(|&&s| s > rel_cutoff * s1).count()
    }

    /// σ_k with 1-based `k`; zero past the end of the stored values.
    pub fn sigma(&self, k: usize) -> f64 {
        assert!(k >= 1, "singular values are 1-indexed");
        self.values.get(k - 1).copied().unwrap_or(0.0)
    }
}

/// Thin SVD `A = U diag(S) Vᵀ` with `p = min(rows, cols)` columns in U and V.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: SingularSpectrum,
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, &sj) in self.s.values().iter().enumerate() {
            for x in us.column_mut(j) {
                *x *= sj;
            }
        }
        us.matmul(&self.v.transpose())
    }
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    a.check_finite()?;
    if a.rows() >= a.cols() {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.transpose())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

/// Hestenes iteration on the columns of a tall (rows >= cols) matrix.
fn jacobi_tall(a: &Matrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let tol = f64::EPSILON * (m as f64).sqrt();
    // columns this small are rounding noise; rotating them against the
    // others only stirs the noise and stalls convergence
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = dot(w.column(p), w.column(p));
                let beta = dot(w.column(q), w.column(q));
                let gamma = dot(w.column(p), w.column(q));
                if gamma == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= tol * alpha.sqrt() * beta.sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD"));
    }

    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, norm2(w.column(j)))).collect();
    // stable sort keeps column order among equal singular values
    order.sort_by(|a, b| b.1.total_cmp(&a.1));

    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    let mut null_cols = Vec::new();
    let s1 = order[0].1;
    for (dst, &(src, sigma)) in order.iter().enumerate() {
        vs.column_mut(dst).copy_from_slice(v.column(src));
        values.push(sigma);
        if sigma > 0.0 && sigma * sigma > negligible && sigma > s1 * f64::EPSILON * 1e-3 {
            let col = u.column_mut(dst);
            for (x, &y) in col.iter_mut().zip(w.column(src)) {
                *x = y / sigma;
            }
        } else {
            null_cols.push(dst);
        }
    }
    complete_orthonormal(&mut u, &null_cols);
    Ok(Svd {
        u,
        s: SingularSpectrum { values },
        v: vs,
    })
}

fn rotate_columns(a: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let rows = a.rows();
    let data = a.data_mut();
    let (lo, hi) = data.split_at_mut(q * rows);
    let cp = &mut lo[p * rows..(p + 1) * rows];
    let cq = &mut hi[..rows];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Replaces the listed columns of `u` with unit vectors orthogonal to every
/// other column.
pub(crate) fn complete_orthonormal(u: &mut Matrix, targets: &[usize]) {
    if targets.is_empty() {
        return;
    }
    let m = u.rows();
    let mut basis: Vec<usize> = (0..u.cols()).filter(|j| !targets.contains(j)).collect();
    for &t in targets {
        // the canonical vector with the largest component outside the
        // current span; its squared residual is at least (m − |basis|)/m
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..m {
            let mut x = vec![0.0; m];
            x[e] = 1.0;
            for _ in 0..2 {
                for &b in &basis {
                    let h = dot(u.column(b), &x);
                    for (xi, &bi) in x.iter_mut().zip(u.column(b)) {
                        *xi -= h * bi;
                    }
                }
            }
            let nx = norm2(&x);
            if best.as_ref().is_none_or(|(bn, _)| nx > *bn) {
                best = Some((nx, x));
            }
        }
        let (nx, x) = best.expect("at least one row");
        assert!(nx > 0.0, "cannot complete orthonormal basis");
        for (d, xi) in u.column_mut(t).iter_mut().zip(&x) {
            *d = xi / nx;
        }
        basis.push(t);
    }
}

/// Largest singular value, computed as `sqrt(λ_max)` of the smaller Gramian.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    a.check_finite()?;
    Ok(spectral_norm_unchecked(a))
}

pub(crate) fn spectral_norm_unchecked(a: &Matrix) -> f64 {
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    // scaling keeps the Gramian clear of overflow and underflow
    let b = a.scale(1.0 / scale);
    let g = if b.cols() <= b.rows() {
        b.gram()
    } else {
        b.transpose().gram()
    };
    scale * lambda_max_unchecked(&g).max(0.0).sqrt()
}

/// Moore–Penrose pseudo-inverse; singular values at or below
/// `cutoff * σ_1` are treated as zero.
pub fn pseudo_inverse(a: &Matrix, cutoff: f64) -> Result<Matrix> {
    if !(cutoff >= 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidTolerance(cutoff));
    }
    let d = svd(a)?;
    let s1 = d.s.largest();
    let (m, n) = a.shape();
    let mut out = Matrix::zeros(n, m);
    if s1 == 0.0 {
        return Ok(out);
    }
    for (k, &sk) in d.s.values().iter().enumerate() {
        if sk <= cutoff * s1 {
            continue;
        }
        let vk = d.v.column(k);
        let uk = d.u.column(k);
        for j in 0..m {
            let f = uk[j] / sk;
            if f == 0.0 {
                continue;
            }
            for (o, &vi) in out.column_mut(j).iter_mut().zip(vk) {
                *o += vi * f;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_defect(q: &Matrix) -> f64 {
        q.gram().sub(&Matrix::identity(q.cols())).max_abs()
    }

    #[test]
    fn diagonal_values() {
        let a = Matrix::from_diagonal(&[3.0, 2.0, 1.0]);
        let d = svd(&a).unwrap();
        assert_eq!(d.s.values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn rank_one_outer_product() {
        // |u| = 2, |v| = 3
        let u = [2.0, 0.0, 0.0, 0.0];
        let v = [0.0, 3.0, 0.0];
        let a = Matrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        let d = svd(&a).unwrap();
        assert!((d.s.values()[0] - 6.0).abs() < 1e-14);
        assert!(d.s.values()[1..].iter().all(|&s| s == 0.0));
        assert!(orthonormality_defect(&d.u) < 1e-14);
        assert!(d.reconstruct().sub(&a).max_abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_reconstructs() {
        let a = Matrix::from_fn(3, 7, |i, j| ((i * 7 + j) as f64).sin());
        let d = svd(&a).unwrap();
        assert_eq!(d.u.shape(), (3, 3));
        assert_eq!(d.v.shape(), (7, 3));
        assert!(d.reconstruct().sub(&a).max_abs() < 1e-13);
        assert!(orthonormality_defect(&d.v) < 1e-13);
    }

    #[test]
    fn spectral_norm_basics() {
        assert_eq!(spectral_norm(&Matrix::zeros(3, 2)).unwrap(), 0.0);
        let a = Matrix::from_diagonal(&[1.0, -4.0]);
        assert!((spectral_norm(&a).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn pinv_of_singular_diagonal() {
        let a = Matrix::from_diagonal(&[2.0, 0.0]);
        let p = pseudo_inverse(&a, 1e-12).unwrap();
        assert_eq!(p, Matrix::from_diagonal(&[0.5, 0.0]));
    }

    #[test]
    fn pinv_of_rotation_is_transpose() {
        let (c, s) = (0.6, 0.8);
        let q = Matrix::from_rows(&[&[c, -s], &[s, c]]).unwrap();
        let p = pseudo_inverse(&q, 1e-12).unwrap();
        assert!(p.sub(&q.transpose()).max_abs() < 1e-15);
    }

    #[test]
    fn spectrum_rank_and_padding() {
        let s = SingularSpectrum::new(vec![1.0, 1e-3, 1e-14]).unwrap();
        assert_eq!(s.numerical_rank(1e-12), 2);
        assert_eq!(s.sigma(4), 0.0);
        assert!(SingularSpectrum::new(vec![1.0, 2.0]).is_err());
    }
}
