//! Built-in parametric model pairs that produce aligned `(H, L)` snapshots.
//!
//! Both high-fidelity models here are desk-scale stand-ins: an analytic
//! shear-corrected beam and a fine-mesh finite-difference diffusion solve.

mod beam;
mod diffusion;

pub use beam::{beam_hifi_substitute, beam_lofi, section_properties, BeamConfig, SectionProperties};
pub use diffusion::{diffusion_pair, diffusion_solve, DiffusionConfig};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bifi::{SampleId, SnapshotMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One draw of the random inputs `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSample {
    pub id: SampleId,
    pub mu: Vec<f64>,
}

/// Closed interval for one uniformly distributed input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformRange {
    pub lo: f64,
    pub hi: f64,
}

impl UniformRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        UniformRange { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub(crate) fn check(&self, name: &'static str, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                name,
                value: x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// `count` i.i.d. uniform samples over the given box.
///
/// Sample `k` depends only on `(seed, k)`: its generator is stream `k` of a
/// ChaCha8 generator seeded with `seed`. Ids are `"{prefix}-{k:05}"`.
pub fn draw_samples(prefix: &str, ranges: &[UniformRange], count: usize, seed: u64) -> Vec<ParameterSample> {
    (0..count)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mu = ranges
                .iter()
                .map(|r| r.lo + (r.hi - r.lo) * rng.random::<f64>())
                .collect();
            ParameterSample {
                id: SampleId(format!("{prefix}-{k:05}")),
                mu,
            }
        })
        .collect()
}

/// Evaluates `f` on every sample and stacks the outputs as columns.
pub fn snapshot_matrix<F>(samples: &[ParameterSample], f: F) -> Result<SnapshotMatrix>
where
    F: Fn(&ParameterSample) -> Result<Vec<f64>> + Sync,
{
    use rayon::prelude::*;
    if samples.is_empty() {
        return Err(Error::InvalidConfig("no samples".into()));
    }
    // order of `collect` follows the sample order, not completion order
    let columns = samples.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
    let data = Matrix::from_columns(&columns)?;
    SnapshotMatrix::new(data, samples.iter().map(|s| s.id.clone()).collect())
}

/// Generates the beam pair: `(high, low)` over `count` seeded samples.
pub fn beam_pair(cfg: &BeamConfig, count: usize, seed: u64) -> Result<(SnapshotMatrix, SnapshotMatrix)> {
    cfg.validate()?;
    let samples = draw_samples("beam", &cfg.input_ranges(), count, seed);
    let high = snapshot_matrix(&samples, |s| beam_hifi_substitute(s, cfg))?;
    let low = snapshot_matrix(&samples, |s| beam_lofi(s, cfg))?;
    Ok((high, low))
}
