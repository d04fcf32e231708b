//! Repeated sub-sampling study of the bound's efficacy, the ratio of the
//! estimated bound to the true error `‖H − Ĥ‖`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{minimize_bound, GramianPair, LowFidelityTerms};
use crate::bifi::{lift, SnapshotMatrix};
use crate::error::{Error, Result};
use crate::id::build_id;
use crate::linalg::{spectral_norm_unchecked, RankMode};

/// True errors below this fraction of `‖H‖` make the ratio meaningless.
pub const DEGENERATE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficacyTrial {
    pub trial: usize,
    /// Column positions drawn for this trial, ascending.
    pub columns: Vec<usize>,
    pub best_rho: f64,
    pub best_k: usize,
    pub best_tau: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficacyReport {
    pub rank: usize,
    pub n_sub: usize,
    pub seed: u64,
    /// `‖H − Ĥ‖`.
    pub true_error: f64,
    pub h_norm: f64,
    pub trials: Vec<EfficacyTrial>,
    pub mean_ratio: f64,
    /// Set when `n < r`, where the estimate is not expected to be conservative.
    pub undersampled: bool,
}

impl EfficacyReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.ratio).collect()
    }
}

/// For each trial draws `n` distinct columns uniformly at random, runs the
/// grid search on their Gramians and divides by the true error of the
/// rank-`r` bi-fidelity estimate.
pub fn efficacy_study(
    h: &SnapshotMatrix,
    l: &SnapshotMatrix,
    r: usize,
    n: usize,
    trials: usize,
    seed: u64,
    tau_grid: &[f64],
) -> Result<EfficacyReport> {
    h.check_aligned(l)?;
    let n_total = l.n_samples();
    if n == 0 || n > n_total {
        return Err(Error::SampleMismatch(format!(
            "subsample size {n} must lie in 1..={n_total}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }

    let id = build_id(l.data(), RankMode::Fixed(r))?;
    let model = lift(&id, h.data().select_columns(id.selected()))?;
    let true_error = spectral_norm_unchecked(&h.data().sub(&model.evaluate_all()));
    let h_norm = spectral_norm_unchecked(h.data());
    let floor = DEGENERATE_FLOOR * h_norm;
    if true_error < floor {
        return Err(Error::DegenerateError {
            error: true_error,
            floor,
        });
    }
    let terms = LowFidelityTerms::from_decomposition(l.data(), &id)?;

    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let columns = draw_columns(seed, trial as u64, n_total, n);
        let g = GramianPair::from_columns(
            &h.data().select_columns(&columns),
            &l.data().select_columns(&columns),
            n_total,
        )?;
        let rep = minimize_bound(&g, &terms, tau_grid)?;
        out.push(EfficacyTrial {
            trial,
            columns,
            best_rho: rep.best_rho,
            best_k: rep.best_k,
            best_tau: rep.best_tau,
            ratio: rep.best_rho / true_error,
        });
    }
    let mean_ratio = out.iter().map(|t| t.ratio).sum::<f64>() / trials as f64;
    Ok(EfficacyReport {
        rank: r,
        n_sub: n,
        seed,
        true_error,
        h_norm,
        trials: out,
        mean_ratio,
        undersampled: n < r,
    })
}

/// `n` distinct positions out of `total`, uniform without replacement, from
/// stream `stream` of the seeded generator. Sorted ascending.
pub fn draw_columns(seed: u64, stream: u64, total: usize, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut cols = sample(&mut rng, total, n).into_vec();
    cols.sort_unstable();
    cols
}
