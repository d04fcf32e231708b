//! Composite cantilever beam under a uniform load.
//!
//! The cross section stacks three rectangles: a bottom flange (`h2`, modulus
//! `E2`), a web (`h3`, modulus `E3`) and a top flange (`h1`, modulus `E1`),
//! all of width `w`. The low-fidelity model is Euler–Bernoulli on the
//! transformed section with `E = E3`, flange widths scaled by `E1/E3` and
//! `E2/E3`, and the holes ignored. The high-fidelity stand-in adds
//! Timoshenko shear compliance of the web, whose area is reduced locally by
//! the circular holes.

use serde::{Deserialize, Serialize};

use super::{ParameterSample, UniformRange};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub length: f64,
    /// Top flange thickness.
    pub h1: f64,
    /// Bottom flange thickness.
    pub h2: f64,
    /// Web height.
    pub h3: f64,
    pub width: f64,
    pub hole_radius: f64,
    pub hole_centers: Vec<f64>,
    pub q: UniformRange,
    pub e1: UniformRange,
    pub e2: UniformRange,
    pub e3: UniformRange,
    /// Number of output points along the top cord, root to tip.
    pub n_grid: usize,
    pub poisson: f64,
    /// Timoshenko shear coefficient of the web.
    pub shear_coefficient: f64,
    /// Multiplier on the shear correction; zero reproduces the low-fidelity model.
    pub shear_scale: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        BeamConfig {
            length: 50.0,
            h1: 0.1,
            h2: 0.1,
            h3: 5.0,
            width: 1.0,
            hole_radius: 1.5,
            hole_centers: vec![5.0, 15.0, 25.0, 35.0, 45.0],
            q: UniformRange::new(9.0, 11.0),
            e1: UniformRange::new(0.9e6, 1.1e6),
            e2: UniformRange::new(0.9e6, 1.1e6),
            e3: UniformRange::new(0.9e4, 1.1e4),
            n_grid: 128,
            poisson: 0.3,
            shear_coefficient: 5.0 / 6.0,
            shear_scale: 1.0,
        }
    }
}

impl BeamConfig {
    pub fn validate(&self) -> Result<()> {
        let geometric = [
            self.length,
            self.h1,
            self.h2,
            self.h3,
            self.width,
            self.hole_radius,
        ];
        if geometric.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidConfig("beam dimensions must be positive".into()));
        }
        if 2.0 * self.hole_radius >= self.h3 {
            return Err(Error::InvalidConfig("holes must fit inside the web".into()));
        }
        for r in [self.q, self.e1, self.e2, self.e3] {
            if !(r.lo > 0.0 && r.lo <= r.hi && r.hi.is_finite()) {
                return Err(Error::InvalidConfig("input ranges must be positive and ordered".into()));
            }
        }
        if self.n_grid < 2 {
            return Err(Error::InvalidConfig("n_grid must be at least 2".into()));
        }
        if !(self.poisson > -1.0 && self.poisson < 0.5) || !(self.shear_coefficient > 0.0) {
            return Err(Error::InvalidConfig("invalid material constants".into()));
        }
        if !(self.shear_scale >= 0.0) {
            return Err(Error::InvalidConfig("shear_scale must be non-negative".into()));
        }
        Ok(())
    }

    /// Ranges of `(q, E1, E2, E3)` in sample order.
    pub fn input_ranges(&self) -> [UniformRange; 4] {
        [self.q, self.e1, self.e2, self.e3]
    }

    /// Output locations along the top cord.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_grid;
        (0..n)
            .map(|i| self.length * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn check_sample(&self, s: &ParameterSample) -> Result<(f64, f64, f64, f64)> {
        if s.mu.len() != 4 {
            return Err(Error::DimensionMismatch {
                what: "beam parameter count",
                expected: 4,
                got: s.mu.len(),
            });
        }
        let names = ["q", "E1", "E2", "E3"];
        for ((&v, r), name) in s.mu.iter().zip(self.input_ranges()).zip(names) {
            r.check(name, v)?;
        }
        Ok((s.mu[0], s.mu[1], s.mu[2], s.mu[3]))
    }
}

/// Transformed-section properties with all widths referred to `E3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProperties {
    pub area: f64,
    /// Height of the neutral axis above the bottom face.
    pub centroid: f64,
    /// Second moment of area about the neutral axis.
    pub inertia: f64,
}

pub fn section_properties(cfg: &BeamConfig, e1: f64, e2: f64, e3: f64) -> SectionProperties {
    let w = cfg.width;
    // (width, height, centroid height) from the bottom up
    let parts = [
        (e2 / e3 * w, cfg.h2, cfg.h2 / 2.0),
        (w, cfg.h3, cfg.h2 + cfg.h3 / 2.0),
        (e1 / e3 * w, cfg.h1, cfg.h2 + cfg.h3 + cfg.h1 / 2.0),
    ];
    let area: f64 = parts.iter().map(|(b, h, _)| b * h).sum();
    let centroid = parts.iter().map(|(b, h, y)| b * h * y).sum::<f64>() / area;
    let inertia = parts
        .iter()
        .map(|(b, h, y)| b * h * h * h / 12.0 + b * h * (y - centroid).powi(2))
        .sum();
    SectionProperties {
        area,
        centroid,
        inertia,
    }
}

/// Euler–Bernoulli deflection `u(x) = −qL⁴/(24EI)·(ξ⁴ − 4ξ³ + 6ξ²)`, `ξ = x/L`.
pub fn beam_lofi(sample: &ParameterSample, cfg: &BeamConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (q, e1, e2, e3) = cfg.check_sample(sample)?;
    Ok(euler_bernoulli(cfg, q, e1, e2, e3))
}

fn euler_bernoulli(cfg: &BeamConfig, q: f64, e1: f64, e2: f64, e3: f64) -> Vec<f64> {
    let sec = section_properties(cfg, e1, e2, e3);
    let len = cfg.length;
    let coef = q * len.powi(4) / (24.0 * e3 * sec.inertia);
    cfg.grid()
        .iter()
        .map(|&x| {
            let xi = x / len;
            -coef * (xi.powi(4) - 4.0 * xi.powi(3) + 6.0 * xi.powi(2))
        })
        .collect()
}

/// Euler–Bernoulli deflection plus web shear deflection
/// `u_s(x) = −q/(κG)·∫₀ˣ (L − s)/A_w(s) ds`, with `G = E3/(2(1+ν))` and
/// `A_w(s)` the web area left by the holes at `s`.
pub fn beam_hifi_substitute(sample: &ParameterSample, cfg: &BeamConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (q, e1, e2, e3) = cfg.check_sample(sample)?;
    let mut u = euler_bernoulli(cfg, q, e1, e2, e3);
    if cfg.shear_scale == 0.0 {
        return Ok(u);
    }
    let g = e3 / (2.0 * (1.0 + cfg.poisson));
    let factor = cfg.shear_scale * q / (cfg.shear_coefficient * g);
    for (ui, s) in u.iter_mut().zip(shear_shape(cfg)) {
        *ui -= factor * s;
    }
    Ok(u)
}

fn web_area(cfg: &BeamConfig, s: f64) -> f64 {
    let r = cfg.hole_radius;
    let chord: f64 = cfg
        .hole_centers
        .iter()
        .map(|&c| {
            let d = s - c;
            if d.abs() < r {
                2.0 * (r * r - d * d).sqrt()
            } else {
                0.0
            }
        })
        .sum();
    cfg.width * (cfg.h3 - chord)
}

const GAUSS_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
        s += w * (f(mid - half * x) + f(mid + half * x));
    }
    s * half
}

/// `∫₀ˣ (L − s)/A_w(s) ds` at every grid point. Integration pieces are split
/// at hole edges, where the integrand has a kink.
fn shear_shape(cfg: &BeamConfig) -> Vec<f64> {
    let len = cfg.length;
    let integrand = |s: f64| (len - s) / web_area(cfg, s);
    let mut breaks: Vec<f64> = cfg
        .hole_centers
        .iter()
        .flat_map(|&c| [c - cfg.hole_radius, c, c + cfg.hole_radius])
        .filter(|&b| b > 0.0 && b < len)
        .collect();
    breaks.sort_by(f64::total_cmp);

    let grid = cfg.grid();
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut lo = a;
        for &bp in breaks.iter().filter(|&&bp| bp > a && bp < b) {
            acc += gauss8(integrand, lo, bp);
            lo = bp;
        }
        acc += gauss8(integrand, lo, b);
        out.push(acc);
    }
    out
}
