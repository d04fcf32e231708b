//! Steady 1-D diffusion `−(a(x; μ) u′)′ = f` on `[0, 1]`, `u(0) = u(1) = 0`.
//!
//! The log-coefficient is a truncated sine series with uniform weights,
//! `log a = amplitude · Σⱼ μⱼ sin(jπx)/j`, `μⱼ ~ U[−1, 1]`. Both fidelities
//! use the same second-order finite-difference scheme and differ only in the
//! number of mesh nodes. The output is the nodal solution, boundaries
//! included.

use serde::{Deserialize, Serialize};

use super::{draw_samples, snapshot_matrix, ParameterSample, UniformRange};
use crate::bifi::SnapshotMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    /// Nodes of the coarse mesh, boundaries included.
    pub mesh_low: usize,
    /// Nodes of the fine mesh, boundaries included.
    pub mesh_high: usize,
    /// Number of sine modes in `log a`.
    pub d_params: usize,
    pub amplitude: f64,
    /// Constant source term `f`.
    pub source: f64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        DiffusionConfig {
            mesh_low: 16,
            mesh_high: 256,
            d_params: 5,
            amplitude: 1.0,
            source: 1.0,
        }
    }
}

impl DiffusionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mesh_low < 3 || self.mesh_high < 3 {
            return Err(Error::InvalidConfig("meshes need at least 3 nodes".into()));
        }
        if self.d_params == 0 {
            return Err(Error::InvalidConfig("d_params must be positive".into()));
        }
        if !self.amplitude.is_finite() || !self.source.is_finite() {
            return Err(Error::InvalidConfig("amplitude and source must be finite".into()));
        }
        Ok(())
    }

    pub fn input_ranges(&self) -> Vec<UniformRange> {
        vec![UniformRange::new(-1.0, 1.0); self.d_params]
    }

    fn check_sample(&self, s: &ParameterSample) -> Result<()> {
        if s.mu.len() != self.d_params {
            return Err(Error::DimensionMismatch {
                what: "diffusion parameter count",
                expected: self.d_params,
                got: s.mu.len(),
            });
        }
        for &m in &s.mu {
            UniformRange::new(-1.0, 1.0).check("mu", m)?;
        }
        Ok(())
    }
}

fn log_coefficient(mu: &[f64], amplitude: f64, x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    amplitude
        * mu.iter()
            .enumerate()
            .map(|(j, m)| {
                let j = (j + 1) as f64;
                m * (j * pi * x).sin() / j
            })
            .sum::<f64>()
}

/// Nodal solution on a uniform mesh of `nodes` points.
pub fn diffusion_solve(sample: &ParameterSample, cfg: &DiffusionConfig, nodes: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    cfg.check_sample(sample)?;
    if nodes < 3 {
        return Err(Error::InvalidConfig("meshes need at least 3 nodes".into()));
    }
    let cells = nodes - 1;
    let h = 1.0 / cells as f64;
    // a at cell midpoints
    let a: Vec<f64> = (0..cells)
        .map(|c| log_coefficient(&sample.mu, cfg.amplitude, (c as f64 + 0.5) * h).exp())
        .collect();

    // interior unknowns 1..=cells-1
    let n = cells - 1;
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![cfg.source * h * h; n];
    for i in 0..n {
        let (aw, ae) = (a[i], a[i + 1]);
        diag[i] = aw + ae;
        if i > 0 {
            lower[i] = -aw;
        }
        if i + 1 < n {
            upper[i] = -ae;
        }
    }
    thomas(&lower, &mut diag, &upper, &mut rhs)?;

    let mut u = Vec::with_capacity(nodes);
    u.push(0.0);
    u.extend(rhs);
    u.push(0.0);
    Ok(u)
}

/// In-place tridiagonal solve; the solution overwrites `rhs`.
fn thomas(lower: &[f64], diag: &mut [f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for i in 1..n {
        if diag[i - 1] == 0.0 {
            return Err(Error::SolverFailure("zero pivot in tridiagonal solve".into()));
        }
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if diag[n - 1] == 0.0 {
        return Err(Error::SolverFailure("zero pivot in tridiagonal solve".into()));
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    Ok(())
}

/// Generates the diffusion pair: `(high, low)` over `count` seeded samples.
pub fn diffusion_pair(cfg: &DiffusionConfig, count: usize, seed: u64) -> Result<(SnapshotMatrix, SnapshotMatrix)> {
    cfg.validate()?;
    let samples = draw_samples("diffusion", &cfg.input_ranges(), count, seed);
    let high = snapshot_matrix(&samples, |s| diffusion_solve(s, cfg, cfg.mesh_high))?;
    let low = snapshot_matrix(&samples, |s| diffusion_solve(s, cfg, cfg.mesh_low))?;
    Ok((high, low))
}
