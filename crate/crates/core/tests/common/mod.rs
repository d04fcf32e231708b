//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's eigen or SVD
//! kernels.
#![allow(dead_code)]

use bifid::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `rows × k` matrix with orthonormal columns (Gram–Schmidt on Gaussians,
/// two passes).
pub fn orthonormal(rng: &mut ChaCha8Rng, rows: usize, k: usize) -> Matrix {
    assert!(k <= rows);
    let mut q = gaussian(rng, rows, k);
    for j in 0..k {
        for _ in 0..2 {
            for p in 0..j {
                let d: f64 = (0..rows).map(|i| q[(i, p)] * q[(i, j)]).sum();
                for i in 0..rows {
                    q[(i, j)] -= d * q[(i, p)];
                }
            }
        }
        let n = (0..rows).map(|i| q[(i, j)].powi(2)).sum::<f64>().sqrt();
        for i in 0..rows {
            q[(i, j)] /= n;
        }
    }
    q
}

/// `U·diag(s)·Vᵀ` with random orthonormal factors.
pub fn with_spectrum(rng: &mut ChaCha8Rng, rows: usize, cols: usize, s: &[f64]) -> Matrix {
    let k = s.len();
    let u = orthonormal(rng, rows, k);
    let v = orthonormal(rng, cols, k);
    Matrix::from_fn(rows, cols, |i, j| (0..k).map(|p| u[(i, p)] * s[p] * v[(j, p)]).sum())
}

/// Geometric spectrum `σ_i = 10^(−decay·i)`, `i = 0..k`.
pub fn geometric(k: usize, decay: f64) -> Vec<f64> {
    (0..k).map(|i| 10f64.powf(-decay * i as f64)).collect()
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (a[(i, j)] + a[(j, i)])).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn gram(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.cols(), a.cols(), |i, j| {
        (0..a.rows()).map(|k| a[(k, i)] * a[(k, j)]).sum()
    })
}

/// Singular values of `a`, descending, by one-sided (Hestenes) Jacobi on
/// the tall orientation. Converges to high relative accuracy, which the
/// Gramian route cannot give for small singular values.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let t = if a.rows() < a.cols() { a.transpose() } else { a.clone() };
    let (m, n) = (t.rows(), t.cols());
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| t[(i, j)]).collect()).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    for _sweep in 0..200 {
        let mut done = true;
        for p in 0..n {
            for q in p + 1..n {
                let a = dot(&cols[p], &cols[p]);
                let b = dot(&cols[q], &cols[q]);
                let g = dot(&cols[p], &cols[q]);
                if g == 0.0 || g.abs() <= 1e-15 * a.sqrt() * b.sqrt() {
                    continue;
                }
                done = false;
                let zeta = (b - a) / (2.0 * g);
                let tt = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + tt * tt).sqrt();
                let s = c * tt;
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * x - s * y;
                    cols[q][i] = s * x + c * y;
                }
            }
        }
        if done {
            break;
        }
    }
    let mut s: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a)[0]
}

/// Whether `a + shift·I` admits a Cholesky factorization.
pub fn cholesky_ok(a: &Matrix, shift: f64) -> bool {
    let n = a.rows();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = a[(j, j)] + shift;
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return false;
        }
        let dj = d.sqrt();
        l[j][j] = dj;
        for i in j + 1..n {
            let mut s = 0.5 * (a[(i, j)] + a[(j, i)]);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / dj;
        }
    }
    true
}

/// Smallest `ε` with `τLᵀL + εI − HᵀH ⪰ 0`, by bisection on `ε` using
/// Cholesky as the PSD test. A relative shift `slack·scale` is added to
/// the test so that exactly singular matrices count as PSD.
pub fn epsilon_by_bisection(h: &Matrix, l: &Matrix, tau: f64, scale: f64, rel_tol: f64) -> f64 {
    let gh = gram(h);
    let gl = gram(l);
    let n = gh.rows();
    let a = Matrix::from_fn(n, n, |i, j| tau * gl[(i, j)] - gh[(i, j)]);
    let psd = |eps: f64| cholesky_ok(&a, eps + 1e-13 * scale);
    let (mut lo, mut hi) = (-scale, scale);
    while !psd(hi) {
        hi *= 2.0;
    }
    while psd(lo) {
        lo *= 2.0;
    }
    while hi - lo > rel_tol * scale {
        let mid = 0.5 * (lo + hi);
        if psd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
