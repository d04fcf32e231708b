//! Column-pivoted Gram–Schmidt QR with one reorthogonalization pass.

use super::matrix::{dot, norm2, Matrix};
use super::svd::{complete_orthonormal, spectral_norm_unchecked};
use crate::error::{Error, Result};

/// How many columns a factorization keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankMode {
    /// Exactly `r` columns.
    Fixed(usize),
    /// The smallest rank whose residual `‖A·P − Q·R‖` (spectral) is within
    /// the tolerance.
    Tolerance(f64),
}

#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// `rows × rank`, orthonormal columns.
    pub q: Matrix,
    /// `rank × cols`, upper triangular in its leading `rank × rank` block.
    pub r: Matrix,
    /// Column `j` of `A·P` is column `perm[j]` of `A`.
    pub perm: Vec<usize>,
    pub rank: usize,
    /// Spectral norm of `A·P − Q·R`.
    pub residual_norm: f64,
}

impl PivotedQr {
    /// `A·P − Q·R`, columns in pivoted order.
    pub fn residual(&self, a: &Matrix) -> Matrix {
        a.select_columns(&self.perm).sub(&self.q.matmul(&self.r))
    }
}

/// Greedy max-residual-norm column pivoting. On equal residual norms the
/// lowest original column index wins.
pub fn pivoted_qr(a: &Matrix, mode: RankMode) -> Result<PivotedQr> {
    a.check_finite()?;
    let (m, n) = a.shape();
    let max_rank = m.min(n);
    let target = match mode {
        RankMode::Fixed(r) => {
            if r == 0 {
                return Err(Error::ZeroRank);
            }
            if r > max_rank {
                return Err(Error::RankExceedsDims { rank: r, max: max_rank });
            }
            Some(r)
        }
        RankMode::Tolerance(t) => {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::InvalidTolerance(t));
            }
            None
        }
    };

    let mut resid = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut qcols: Vec<Vec<f64>> = Vec::with_capacity(max_rank);

    for step in 0..max_rank {
        if let Some(r) = target {
            if step == r {
                break;
            }
        }

        // pivot: largest residual column among the remaining ones
        let mut best = step;
        let mut best_norm = -1.0;
        for (pos, &col) in perm.iter().enumerate().skip(step) {
            let nrm = norm2(resid.column(col));
            let better = nrm > best_norm || (nrm == best_norm && col < perm[best]);
            if better {
                best = pos;
                best_norm = nrm;
            }
        }
        perm.swap(step, best);
        let pivot = perm[step];

        let mut q = resid.column(pivot).to_vec();
        if best_norm > 0.0 {
            // second Gram–Schmidt pass against the accepted basis
            for prev in &qcols {
                let h = dot(prev, &q);
                for (x, &p) in q.iter_mut().zip(prev) {
                    *x -= h * p;
                }
            }
        }
        let qn = norm2(&q);
        if qn > 0.0 && qn > f64::EPSILON * best_norm.max(f64::MIN_POSITIVE) {
            for x in &mut q {
                *x /= qn;
            }
        } else {
            // exactly dependent column: any unit vector orthogonal to Q
            let mut tmp = Matrix::zeros(m, qcols.len() + 1);
            for (j, c) in qcols.iter().enumerate() {
                tmp.column_mut(j).copy_from_slice(c);
            }
            complete_orthonormal(&mut tmp, &[qcols.len()]);
            q = tmp.column(qcols.len()).to_vec();
        }

        for &col in &perm[step..] {
            let c = resid.column_mut(col);
            let h = dot(&q, c);
            for (x, &qi) in c.iter_mut().zip(&q) {
                *x -= h * qi;
            }
        }
        qcols.push(q);

        if let RankMode::Tolerance(t) = mode {
            let residual_norm = if step + 1 == n {
                0.0
            } else {
                spectral_norm_unchecked(&resid.select_columns(&perm[step + 1..]))
            };
            if residual_norm <= t {
                break;
            }
        }
    }

    let rank = qcols.len();
    let mut q = Matrix::zeros(m, rank);
    for (j, c) in qcols.iter().enumerate() {
        q.column_mut(j).copy_from_slice(c);
    }
    let ap = a.select_columns(&perm);
    let mut r = q.tr_matmul(&ap);
    for j in 0..rank {
        for i in j + 1..rank {
            r[(i, j)] = 0.0;
        }
    }
    let out = PivotedQr {
        q,
        r,
        perm,
        rank,
        residual_norm: 0.0,
    };
    let residual_norm = spectral_norm_unchecked(&out.residual(a));
    Ok(PivotedQr {
        residual_norm,
        ..out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_its_own_factorization() {
        let a = Matrix::identity(3);
        let f = pivoted_qr(&a, RankMode::Fixed(3)).unwrap();
        assert_eq!(f.perm, vec![0, 1, 2]);
        assert_eq!(f.q, Matrix::identity(3));
        assert_eq!(f.r, Matrix::identity(3));
    }

    #[test]
    fn duplicated_column_has_rank_one() {
        let a = Matrix::from_rows(&[&[1.0, 1.0], &[2.0, 2.0], &[-3.0, -3.0]]).unwrap();
        let f = pivoted_qr(&a, RankMode::Tolerance(1e-12)).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.perm[0], 0, "tie goes to the lowest index");
        assert!(f.residual_norm <= 1e-12);
    }

    #[test]
    fn zero_matrix_fixed_rank_stays_orthonormal() {
        let a = Matrix::zeros(4, 3);
        let f = pivoted_qr(&a, RankMode::Fixed(2)).unwrap();
        assert!(f.q.gram().sub(&Matrix::identity(2)).max_abs() < 1e-15);
        assert_eq!(f.r.max_abs(), 0.0);
    }

    #[test]
    fn rank_errors() {
        let a = Matrix::identity(2);
        assert!(matches!(
            pivoted_qr(&a, RankMode::Fixed(3)),
            Err(Error::RankExceedsDims { rank: 3, max: 2 })
        ));
        assert!(matches!(pivoted_qr(&a, RankMode::Fixed(0)), Err(Error::ZeroRank)));
        assert!(pivoted_qr(&a, RankMode::Tolerance(-1.0)).is_err());
    }

    #[test]
    fn pivots_largest_column_first() {
        let a = Matrix::from_rows(&[&[1.0, 0.0, 5.0], &[0.0, 2.0, 0.0]]).unwrap();
        let f = pivoted_qr(&a, RankMode::Fixed(2)).unwrap();
        assert_eq!(&f.perm[..2], &[2, 1]);
        assert!(f.residual_norm < 1e-14);
    }
}
