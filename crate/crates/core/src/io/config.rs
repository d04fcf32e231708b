//! Run configuration shared by the CLI subcommands.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bound::{linear_tau_grid, log_tau_grid};
use crate::error::{Error, Result};
use crate::linalg::RankMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TauScale {
    #[default]
    Log,
    Linear,
}

/// A τ grid: `count` points over `[min, max]`. Log grids are preceded by
/// τ = 0 when `include_zero` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: TauScale,
    pub include_zero: bool,
}

impl Default for TauGridSpec {
    fn default() -> Self {
        TauGridSpec {
            min: 1e-6,
            max: 1e6,
            count: 200,
            scale: TauScale::Log,
            include_zero: true,
        }
    }
}

impl TauGridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::EmptyGrid);
        }
        for v in [self.min, self.max] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::NegativeTau(v));
            }
        }
        if self.min > self.max {
            return Err(Error::InvalidConfig(format!(
                "tau-min {} exceeds tau-max {}",
                self.min, self.max
            )));
        }
        if self.scale == TauScale::Log && self.min == 0.0 {
            return Err(Error::InvalidConfig("log grid needs tau-min > 0".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match self.scale {
            TauScale::Log => log_tau_grid(self.min, self.max, self.count, self.include_zero),
            TauScale::Linear => linear_tau_grid(self.min, self.max, self.count),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub rank: Option<usize>,
    pub tolerance: Option<f64>,
    pub tau: TauGridSpec,
    pub n: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Exactly one of rank and tolerance must be set.
    pub fn rank_mode(&self) -> Result<RankMode> {
        match (self.rank, self.tolerance) {
            (Some(0), None) => Err(Error::ZeroRank),
            (Some(r), None) => Ok(RankMode::Fixed(r)),
            (None, Some(t)) if t >= 0.0 && t.is_finite() => Ok(RankMode::Tolerance(t)),
            (None, Some(t)) => Err(Error::InvalidTolerance(t)),
            _ => Err(Error::InvalidConfig("give exactly one of --rank and --tol".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tau.validate()?;
        if self.n == Some(0) {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        Ok(())
    }
}
