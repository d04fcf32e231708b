//! Computable upper bound on the bi-fidelity error `‖H − Ĥ‖`.
//!
//! For a scaling `τ ≥ 0` let `ε(τ) = λ_max(HᵀH − τLᵀL)`. With `σ_k` the
//! singular values of `L`, every `k ≤ rank(L)` and `τ` give
//!
//! ```text
//! ρ_k(τ) = (1 + ‖C_L‖)·sqrt(τσ²_{k+1} + ε(τ)) + ‖L − L̂‖·sqrt(τ + ε(τ)/σ_k²)
//! ```
//!
//! and `‖H − Ĥ‖ ≤ min ρ_k(τ)`, with `σ_{k+1} = 0` at `k = rank(L)`. Only
//! `ε(τ)` involves the high-fidelity data, and it is estimated from `n`
//! sub-sampled columns as `ε̂(τ) = (N/n)·λ_max(Ĝ_H − τĜ_L)`.

mod efficacy;
mod oracle;

pub use efficacy::{draw_columns, efficacy_study, EfficacyReport, EfficacyTrial, DEGENERATE_FLOOR};
pub use oracle::{lifting_oracle_t, LiftingOracle};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bifi::SnapshotMatrix;
use crate::error::{Error, Result};
use crate::id::InterpDecomposition;
use crate::linalg::{lambda_max_unchecked, svd, Matrix, SingularSpectrum};

/// Singular values below this fraction of `σ_1` do not count toward `rank(L)`.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Zero followed by `count` log-spaced points on `[1e-6, 1e6]`.
pub fn default_tau_grid() -> Vec<f64> {
    log_tau_grid(1e-6, 1e6, 200, true)
}

/// `count` log-spaced points on `[min, max]`, optionally preceded by zero.
pub fn log_tau_grid(min: f64, max: f64, count: usize, include_zero: bool) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && count >= 1);
    let mut grid = Vec::with_capacity(count + 1);
    if include_zero {
        grid.push(0.0);
    }
    if count == 1 {
        grid.push(min);
        return grid;
    }
    let (a, b) = (min.log10(), max.log10());
    for i in 0..count {
        let t = a + (b - a) * i as f64 / (count - 1) as f64;
        grid.push(10f64.powf(t));
    }
    // pin the end points against powf rounding
    let last = grid.len() - 1;
    grid[last] = max;
    grid[usize::from(include_zero)] = min;
    grid
}

/// `count` evenly spaced points on `[min, max]`.
pub fn linear_tau_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(min >= 0.0 && max >= min && count >= 1);
    if count == 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Singular values of `[H; L]` below this fraction of the largest are
/// treated as zero when compressing the Gramians.
pub const ROW_SPACE_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// Gramians of `n` columns sampled from `H` and the same columns of `L`.
///
/// When `[H; L]` has fewer rows than columns, the Gramians are stored in an
/// orthonormal basis `V` of its numerical row space, `Ĝ_H = (HV)ᵀ(HV)`. The
/// pencil `HᵀH − τLᵀL` vanishes on the complement of that space, so its
/// remaining eigenvalues are exact zeros and are accounted for without
/// rounding noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramianPair {
    gh: Matrix,
    gl: Matrix,
    n: usize,
    /// Whether the compressed basis left out a null space.
    null_space: bool,
    n_total: usize,
    c: f64,
}

impl GramianPair {
    /// Gramians of aligned column subsets; `n_total` is the full sample count
    /// `N`, so the normalizing constant is `N / n`.
    pub fn from_columns(high: &Matrix, low: &Matrix, n_total: usize) -> Result<Self> {
        if high.cols() != low.cols() {
            return Err(Error::SampleMismatch(format!(
                "{} high-fidelity columns vs {} low-fidelity columns",
                high.cols(),
                low.cols()
            )));
        }
        let n = high.cols();
        if n > n_total {
            return Err(Error::SampleMismatch(format!(
                "subsample of {n} exceeds total {n_total}"
            )));
        }
        high.check_finite()?;
        low.check_finite()?;
        let c = n_total as f64 / n as f64;
        if let Some(basis) = row_space_basis(high, low)? {
            return Ok(GramianPair {
                gh: high.matmul(&basis).gram(),
                gl: low.matmul(&basis).gram(),
                n,
                null_space: true,
                n_total,
                c,
            });
        }
        Ok(GramianPair {
            gh: high.gram(),
            gl: low.gram(),
            n,
            null_space: false,
            n_total,
            c,
        })
    }

    /// Full Gramians (`n = N`, `c = 1`).
    pub fn full(high: &Matrix, low: &Matrix) -> Result<Self> {
        Self::from_columns(high, low, high.cols())
    }

    /// Gramians from a high-fidelity subsample and the matching columns of
    /// the full low-fidelity matrix, matched by sample id.
    pub fn from_subsample(high_sub: &SnapshotMatrix, low: &SnapshotMatrix) -> Result<Self> {
        let low_sub = low.columns_by_id(high_sub.sample_ids())?;
        Self::from_columns(high_sub.data(), low_sub.data(), low.n_samples())
    }

    pub fn gh(&self) -> &Matrix {
        &self.gh
    }

    pub fn gl(&self) -> &Matrix {
        &self.gl
    }

    pub fn n_sub(&self) -> usize {
        self.n
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Normalizing constant `N / n`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `c·λ_max(Ĝ_H − τĜ_L)`; may be negative.
    pub fn epsilon(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        let diff = self.gh.axpy(-tau, &self.gl);
        let mut lmax = lambda_max_unchecked(&diff);
        if self.null_space {
            lmax = lmax.max(0.0);
        }
        Ok(self.c * lmax)
    }
}

/// Orthonormal basis of the numerical row space of `[H; L]`, or `None` when
/// it would not be smaller than the column count.
fn row_space_basis(high: &Matrix, low: &Matrix) -> Result<Option<Matrix>> {
    let n = high.cols();
    if high.rows() + low.rows() >= n {
        return Ok(None);
    }
    let stacked = high.vstack(low);
    let sv = svd(&stacked)?;
    let s1 = sv.s.largest();
    if s1 == 0.0 {
        return Ok(None);
    }
    let p = sv.s.values().iter().take_while(|&&s| s > ROW_SPACE_CUTOFF * s1).count();
    Ok(Some(sv.v.column_range(0, p)))
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTau(tau))
    }
}

/// `ε(τ) = λ_max(HᵀH − τLᵀL)` from the full matrices.
pub fn epsilon_exact(h: &SnapshotMatrix, l: &SnapshotMatrix, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    h.check_aligned(l)?;
    GramianPair::full(h.data(), l.data())?.epsilon(tau)
}

/// `ε̂(τ)` from a Gramian pair.
pub fn epsilon_estimated(g: &GramianPair, tau: f64) -> Result<f64> {
    g.epsilon(tau)
}

/// The low-fidelity quantities entering `ρ_k(τ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowFidelityTerms {
    pub sigma: SingularSpectrum,
    /// `‖C_L‖`.
    pub cl_norm: f64,
    /// `‖L − L̂‖`.
    pub id_residual: f64,
}

impl LowFidelityTerms {
    pub fn from_decomposition(l: &Matrix, id: &InterpDecomposition) -> Result<Self> {
        if l.cols() != id.n_samples() {
            return Err(Error::DimensionMismatch {
                what: "low-fidelity columns",
                expected: id.n_samples(),
                got: l.cols(),
            });
        }
        Ok(LowFidelityTerms {
            sigma: svd(l)?.s,
            cl_norm: id.coeff_norm(),
            id_residual: id.residual_norm(),
        })
    }

    /// `rank(L)` with the relative cutoff [`RANK_CUTOFF`].
    pub fn rank(&self) -> usize {
        self.sigma.numerical_rank(RANK_CUTOFF)
    }
}

/// The two terms `(B1, B2)` of `ρ_k(τ)`, or `None` when a radicand is
/// negative or `σ_k = 0`.
pub fn rho_terms(
    k: usize,
    tau: f64,
    eps: f64,
    terms: &LowFidelityTerms,
) -> Result<Option<(f64, f64)>> {
    let rank = terms.rank();
    if k == 0 || k > rank {
        return Err(Error::KOutOfRange { k, rank });
    }
    check_tau(tau)?;
    Ok(rho_terms_unchecked(k, rank, tau, eps, terms))
}

fn rho_terms_unchecked(
    k: usize,
    rank: usize,
    tau: f64,
    eps: f64,
    terms: &LowFidelityTerms,
) -> Option<(f64, f64)> {
    Some((b1_term(k, rank, tau, eps, terms)?, b2_term(k, tau, eps, terms)?))
}

fn b1_term(k: usize, rank: usize, tau: f64, eps: f64, terms: &LowFidelityTerms) -> Option<f64> {
    let s_next = if k == rank { 0.0 } else { terms.sigma.sigma(k + 1) };
    let rad = tau * s_next * s_next + eps;
    (rad >= 0.0).then(|| (1.0 + terms.cl_norm) * rad.sqrt())
}

fn b2_term(k: usize, tau: f64, eps: f64, terms: &LowFidelityTerms) -> Option<f64> {
    let s_k = terms.sigma.sigma(k);
    if s_k == 0.0 {
        return None;
    }
    let rad = tau + eps / (s_k * s_k);
    (rad >= 0.0).then(|| terms.id_residual * rad.sqrt())
}

/// `ρ_k(τ)`, or `None` for an invalid combination.
pub fn rho(k: usize, tau: f64, eps: f64, terms: &LowFidelityTerms) -> Result<Option<f64>> {
    Ok(rho_terms(k, tau, eps, terms)?.map(|(b1, b2)| b1 + b2))
}

/// Looser closed form `sqrt(r(N−r)+1)·(1 + σ_{k+1}/σ_k)·sqrt(τσ_k² + ε)`.
pub fn simplified_bound(
    k: usize,
    tau: f64,
    eps: f64,
    sigma: &SingularSpectrum,
    rank_id: usize,
    n_total: usize,
) -> f64 {
    let s = ((rank_id * (n_total - rank_id) + 1) as f64).sqrt();
    let (sk, sk1) = (sigma.sigma(k), sigma.sigma(k + 1));
    s * (1.0 + sk1 / sk) * (tau * sk * sk + eps).max(0.0).sqrt()
}

/// How the τ grid is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sweep {
    Serial,
    #[default]
    Parallel,
}

/// One `(k, τ)` cell of the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoEntry {
    pub k: usize,
    pub tau: f64,
    pub eps_hat: f64,
    /// `None` for an invalid combination.
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub tau_grid: Vec<f64>,
    /// `ε̂(τ)` per grid point.
    pub eps_values: Vec<f64>,
    /// Every `(k, τ)` cell, ordered by `k` then by grid position.
    pub rho: Vec<RhoEntry>,
    pub best_rho: f64,
    pub best_k: usize,
    /// τ of the first term at the optimum.
    pub best_tau: f64,
    /// τ of the second term; equals `best_tau` unless the two terms were
    /// minimized independently.
    pub best_tau_b2: f64,
    pub b1: f64,
    pub b2: f64,
    pub rank_l: usize,
    pub n_sub: usize,
    pub n_total: usize,
    pub terms: LowFidelityTerms,
}

impl BoundReport {
    /// `ε̂` at `best_tau`.
    pub fn best_eps(&self) -> f64 {
        let i = self
            .tau_grid
            .iter()
            .position(|&t| t == self.best_tau)
            .expect("best tau is on the grid");
        self.eps_values[i]
    }
}

fn eps_on_grid(g: &GramianPair, grid: &[f64], sweep: Sweep) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in grid {
        check_tau(t)?;
    }
    let eps = match sweep {
        Sweep::Serial => grid.iter().map(|&t| g.epsilon(t)).collect::<Result<Vec<_>>>()?,
        Sweep::Parallel => grid.par_iter().map(|&t| g.epsilon(t)).collect::<Result<Vec<_>>>()?,
    };
    Ok(eps)
}

fn grid_cells(
    grid: &[f64],
    eps: &[f64],
    rank: usize,
    terms: &LowFidelityTerms,
) -> Vec<(RhoEntry, Option<(f64, f64)>)> {
    let mut cells = Vec::with_capacity(rank * grid.len());
    for k in 1..=rank {
        for (&tau, &e) in grid.iter().zip(eps) {
            let bt = rho_terms_unchecked(k, rank, tau, e, terms);
            cells.push((
                RhoEntry {
                    k,
                    tau,
                    eps_hat: e,
                    rho: bt.map(|(a, b)| a + b),
                },
                bt,
            ));
        }
    }
    cells
}

/// Lexicographic `(ρ, τ, k)` order used to pick the minimizer.
fn better(a: (f64, f64, usize), b: (f64, f64, usize)) -> bool {
    a.0.total_cmp(&b.0)
        .then(a.1.total_cmp(&b.1))
        .then(a.2.cmp(&b.2))
        .is_lt()
}

/// Grid search for `min_{k, τ} ρ_k(τ)` with `ε̂` from the Gramian pair.
pub fn minimize_bound(g: &GramianPair, terms: &LowFidelityTerms, grid: &[f64]) -> Result<BoundReport> {
    minimize_bound_with(g, terms, grid, Sweep::Parallel)
}

pub fn minimize_bound_with(
    g: &GramianPair,
    terms: &LowFidelityTerms,
    grid: &[f64],
    sweep: Sweep,
) -> Result<BoundReport> {
    let eps = eps_on_grid(g, grid, sweep)?;
    let rank = terms.rank();
    let cells = grid_cells(grid, &eps, rank, terms);

    let mut best: Option<((f64, f64, usize), (f64, f64))> = None;
    for (cell, bt) in &cells {
        if let (Some(r), Some(bt)) = (cell.rho, bt) {
            let key = (r, cell.tau, cell.k);
            if best.is_none_or(|(b, _)| better(key, b)) {
                best = Some((key, *bt));
            }
        }
    }
    let ((best_rho, best_tau, best_k), (b1, b2)) = best.ok_or(Error::AllCombinationsInvalid)?;
    Ok(BoundReport {
        tau_grid: grid.to_vec(),
        eps_values: eps,
        rho: cells.into_iter().map(|(c, _)| c).collect(),
        best_rho,
        best_k,
        best_tau,
        best_tau_b2: best_tau,
        b1,
        b2,
        rank_l: rank,
        n_sub: g.n_sub(),
        n_total: g.n_total(),
        terms: terms.clone(),
    })
}

/// Variant where the two terms of `ρ_k` use independent grid points.
pub fn minimize_bound_two_tau(
    g: &GramianPair,
    terms: &LowFidelityTerms,
    grid: &[f64],
) -> Result<BoundReport> {
    minimize_bound_two_tau_with(g, terms, grid, Sweep::Parallel)
}

pub fn minimize_bound_two_tau_with(
    g: &GramianPair,
    terms: &LowFidelityTerms,
    grid: &[f64],
    sweep: Sweep,
) -> Result<BoundReport> {
    let eps = eps_on_grid(g, grid, sweep)?;
    let rank = terms.rank();

    let argmin = |f: &dyn Fn(f64, f64) -> Option<f64>| -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (&tau, &e) in grid.iter().zip(&eps) {
            if let Some(v) = f(tau, e) {
                if out.is_none_or(|(bv, bt)| better((v, tau, 0), (bv, bt, 0))) {
                    out = Some((v, tau));
                }
            }
        }
        out
    };

    let mut best: Option<(f64, usize, f64, f64, f64, f64)> = None;
    for k in 1..=rank {
        let t1 = argmin(&|tau, e| b1_term(k, rank, tau, e, terms));
        let t2 = argmin(&|tau, e| b2_term(k, tau, e, terms));
        if let (Some((b1, tau1)), Some((b2, tau2))) = (t1, t2) {
            let total = b1 + b2;
            if best.is_none_or(|b| better((total, tau1, k), (b.0, b.2, b.1))) {
                best = Some((total, k, tau1, tau2, b1, b2));
            }
        }
    }
    let (best_rho, best_k, best_tau, best_tau_b2, b1, b2) =
        best.ok_or(Error::AllCombinationsInvalid)?;
    let cells = grid_cells(grid, &eps, rank, terms);
    Ok(BoundReport {
        tau_grid: grid.to_vec(),
        eps_values: eps,
        rho: cells.into_iter().map(|(c, _)| c).collect(),
        best_rho,
        best_k,
        best_tau,
        best_tau_b2,
        b1,
        b2,
        rank_l: rank,
        n_sub: g.n_sub(),
        n_total: g.n_total(),
        terms: terms.clone(),
    })
}
