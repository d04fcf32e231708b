//! Interpolative decomposition `L ≈ L(r)·C_L` built from a column-pivoted QR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    pivoted_qr, pseudo_inverse, spectral_norm_unchecked, svd, Matrix, PivotedQr, RankMode,
};

/// `R₁₁` condition numbers above this switch `Z` to the minimum-norm
/// least-squares solution.
pub const ILL_CONDITIONED: f64 = 1e8;
/// Relative singular-value cutoff for the minimum-norm solve.
pub const PINV_CUTOFF: f64 = 1e-12;

/// A rank-`r` column interpolative decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpDecomposition {
    rank: usize,
    selected: Vec<usize>,
    skeleton: Matrix,
    coeffs: Matrix,
    residual_norm: f64,
    /// Whether `Z` came from the minimum-norm solve.
    min_norm_solve: bool,
}

impl InterpDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Column indices of `L` forming the skeleton, in pivot order.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    /// `m × r` matrix of the selected columns.
    pub fn skeleton(&self) -> &Matrix {
        &self.skeleton
    }

    /// `r × N` coefficient matrix `C_L`.
    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    /// `‖L − L(r)·C_L‖` in the spectral norm.
    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn used_min_norm_solve(&self) -> bool {
        self.min_norm_solve
    }

    pub fn n_samples(&self) -> usize {
        self.coeffs.cols()
    }

    /// Spectral norm of `C_L`.
    pub fn coeff_norm(&self) -> f64 {
        spectral_norm_unchecked(&self.coeffs)
    }

    pub fn reconstruct(&self) -> Matrix {
        self.skeleton.matmul(&self.coeffs)
    }

    /// Shape and index consistency of a decomposition read from disk.
    pub fn check_consistent(&self) -> Result<()> {
        let r = self.rank;
        if r == 0 {
            return Err(Error::ZeroRank);
        }
        let n = self.coeffs.cols();
        let checks = [
            ("selected column count", r, self.selected.len()),
            ("skeleton columns", r, self.skeleton.cols()),
            ("coefficient rows", r, self.coeffs.rows()),
        ];
        for (what, expected, got) in checks {
            if expected != got {
                return Err(Error::DimensionMismatch { what, expected, got });
            }
        }
        if let Some(&j) = self.selected.iter().find(|&&j| j >= n) {
            return Err(Error::DimensionMismatch {
                what: "selected column index bound",
                expected: n,
                got: j,
            });
        }
        let mut seen = self.selected.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != r {
            return Err(Error::InvalidConfig("selected columns repeat".into()));
        }
        self.skeleton.check_finite()?;
        self.coeffs.check_finite()
    }
}

/// Builds the decomposition with a fixed rank or a spectral-norm tolerance
/// on `‖L − L̂‖`.
pub fn build_id(l: &Matrix, mode: RankMode) -> Result<InterpDecomposition> {
    l.check_finite()?;
    match mode {
        RankMode::Fixed(r) => {
            let qr = pivoted_qr(l, RankMode::Fixed(r))?;
            from_qr(l, &qr, r)
        }
        RankMode::Tolerance(t) => {
            let qr = pivoted_qr(l, RankMode::Tolerance(t))?;
            let max_rank = l.rows().min(l.cols());
            let mut r = qr.rank;
            // pivot order does not depend on the target rank, so one full
            // factorization serves every candidate rank
            let full = pivoted_qr(l, RankMode::Fixed(max_rank))?;
            loop {
                let id = from_qr(l, &full, r)?;
                if id.residual_norm <= t {
                    return Ok(id);
                }
                if r == max_rank {
                    return Err(Error::ToleranceUnreachable {
                        tolerance: t,
                        best: id.residual_norm,
                    });
                }
                r += 1;
            }
        }
    }
}

/// Decomposition of rank `r` from the leading part of a pivoted QR.
fn from_qr(l: &Matrix, qr: &PivotedQr, r: usize) -> Result<InterpDecomposition> {
    let n = l.cols();
    debug_assert!(r <= qr.rank);
    let selected = qr.perm[..r].to_vec();

    // [I | Z] in pivoted column order
    let mut ip = Matrix::zeros(r, n);
    for i in 0..r {
        ip[(i, i)] = 1.0;
    }
    let mut min_norm_solve = false;
    if r < n {
        let r11 = Matrix::from_fn(r, r, |i, j| qr.r[(i, j)]);
        let r12 = Matrix::from_fn(r, n - r, |i, j| qr.r[(i, r + j)]);
        let sv = svd(&r11)?;
        let smax = sv.s.largest();
        let smin = sv.s.values()[r - 1];
        let z = if smin == 0.0 || smax / smin > ILL_CONDITIONED {
            min_norm_solve = true;
            pseudo_inverse(&r11, PINV_CUTOFF)?.matmul(&r12)
        } else {
            back_substitute(&r11, &r12)
        };
        for j in 0..n - r {
            for i in 0..r {
                ip[(i, r + j)] = z[(i, j)];
            }
        }
    }

    // C_L = [I | Z] Pᵀ
    let mut coeffs = Matrix::zeros(r, n);
    for (pos, &col) in qr.perm.iter().enumerate() {
        coeffs.column_mut(col).copy_from_slice(ip.column(pos));
    }
    let skeleton = l.select_columns(&selected);
    let residual_norm = spectral_norm_unchecked(&l.sub(&skeleton.matmul(&coeffs)));
    Ok(InterpDecomposition {
        rank: r,
        selected,
        skeleton,
        coeffs,
        residual_norm,
        min_norm_solve,
    })
}

/// Solves `U X = B` for upper-triangular `U`.
fn back_substitute(u: &Matrix, b: &Matrix) -> Matrix {
    let r = u.rows();
    let mut x = b.clone();
    for j in 0..b.cols() {
        let col = x.column_mut(j);
        for i in (0..r).rev() {
            let mut s = col[i];
            for k in i + 1..r {
                s -= u[(i, k)] * col[k];
            }
            col[i] = s / u[(i, i)];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    fn sample_matrix() -> Matrix {
        Matrix::from_fn(6, 9, |i, j| {
            let x = i as f64 / 5.0;
            let mu = 1.0 + j as f64 * 0.3;
            (-(mu * x)).exp() + 0.1 * (mu * x).sin()
        })
    }

    #[test]
    fn full_rank_in_columns_is_exact() {
        let l = Matrix::from_fn(7, 4, |i, j| ((i + 2 * j) as f64).cos());
        let id = build_id(&l, RankMode::Fixed(4)).unwrap();
        assert_eq!(id.reconstruct(), l);
        assert_eq!(id.residual_norm(), 0.0);
    }

    #[test]
    fn selected_columns_are_interpolated_exactly() {
        let l = sample_matrix();
        let id = build_id(&l, RankMode::Fixed(3)).unwrap();
        let rec = id.reconstruct();
        for (k, &j) in id.selected().iter().enumerate() {
            assert_eq!(rec.column(j), l.column(j));
            for i in 0..3 {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert_eq!(id.coeffs()[(i, j)], expect);
            }
        }
        let direct = spectral_norm(&l.sub(&rec)).unwrap();
        assert!((direct - id.residual_norm()).abs() <= 1e-12 * direct.max(1e-300));
    }

    #[test]
    fn rank_one_input() {
        let shape: Vec<f64> = (0..10).map(|i| (i as f64).powi(2)).collect();
        let l = Matrix::from_fn(10, 6, |i, j| shape[i] * (1.0 + j as f64));
        let id = build_id(&l, RankMode::Fixed(1)).unwrap();
        assert!(id.residual_norm() <= 1e-10 * spectral_norm(&l).unwrap());
        assert_eq!(id.selected(), &[5]);
    }

    #[test]
    fn tolerance_mode_picks_smallest_rank() {
        let l = sample_matrix();
        let tol = 1e-4 * spectral_norm(&l).unwrap();
        let id = build_id(&l, RankMode::Tolerance(tol)).unwrap();
        assert!(id.residual_norm() <= tol);
        if id.rank() > 1 {
            let smaller = build_id(&l, RankMode::Fixed(id.rank() - 1)).unwrap();
            assert!(smaller.residual_norm() > tol);
        }
    }

    #[test]
    fn unreachable_tolerance() {
        // 3 rows, 5 columns: rank 3 leaves rounding-level residual
        let l = Matrix::from_fn(3, 5, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + 0.1);
        let full = build_id(&l, RankMode::Fixed(3)).unwrap();
        if full.residual_norm() > 0.0 {
            let err = build_id(&l, RankMode::Tolerance(full.residual_norm() * 1e-3));
            assert!(matches!(err, Err(Error::ToleranceUnreachable { .. })));
        }
    }

    #[test]
    fn nan_rejected() {
        let l = Matrix::from_raw(2, 2, vec![1.0, 0.0, f64::NAN, 1.0]);
        assert!(matches!(
            build_id(&l, RankMode::Fixed(1)),
            Err(Error::NonFiniteInput { .. })
        ));
    }
}
