//! Explicit lifting operator `T = H·P_{V_k}·L⁺` and residual `E = H − T·L`.
//!
//! The error bound never needs `T`; it is built here only to check the
//! inequalities `‖E‖² ≤ τσ²_{k+1} + ε(τ)` and `‖T‖² ≤ τ + ε(τ)/σ_k²`
//! directly.

use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse, svd, Matrix, SingularSpectrum};

use super::RANK_CUTOFF;

#[derive(Debug, Clone)]
pub struct LiftingOracle {
    /// `M × m` lifting operator.
    pub t: Matrix,
    /// `M × N` residual `H − T·L`.
    pub e: Matrix,
    /// `H·P_{V_k^⊥}`, which equals `e` in exact arithmetic.
    pub h_perp: Matrix,
    pub sigma: SingularSpectrum,
}

pub fn lifting_oracle_t(h: &Matrix, l: &Matrix, k: usize) -> Result<LiftingOracle> {
    if h.cols() != l.cols() {
        return Err(Error::SampleMismatch(format!(
            "{} vs {} columns",
            h.cols(),
            l.cols()
        )));
    }
    let d = svd(l)?;
    let rank = d.s.numerical_rank(RANK_CUTOFF);
    if k == 0 || k > rank {
        return Err(Error::KOutOfRange { k, rank });
    }
    let vk = d.v.column_range(0, k);
    let proj = vk.matmul(&vk.transpose());
    let hp = h.matmul(&proj);
    let t = hp.matmul(&pseudo_inverse(l, RANK_CUTOFF)?);
    let e = h.sub(&t.matmul(l));
    let h_perp = h.sub(&hp);
    Ok(LiftingOracle {
        t,
        e,
        h_perp,
        sigma: d.s,
    })
}
