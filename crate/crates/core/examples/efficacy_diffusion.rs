//! Efficacy of the error bound on the 1-D diffusion pair.
//!
//! Usage: `cargo run --release --example efficacy_diffusion [amplitude] [n...]`

use bifid::bound::{default_tau_grid, efficacy_study};
use bifid::linalg::svd;
use bifid::models::{diffusion_pair, DiffusionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut cfg = DiffusionConfig::default();
    if let Some(a) = args.next() {
        cfg.amplitude = a.parse()?;
    }
    let ns: Vec<usize> = args.map(|s| s.parse()).collect::<Result<_, _>>()?;
    let ns = if ns.is_empty() { vec![8, 12, 20, 40] } else { ns };

    let (high, low) = diffusion_pair(&cfg, 200, 2024)?;
    let s = svd(low.data())?.s;
    let s1 = s.largest();
    println!("amplitude {}: low-fidelity sigma_k/sigma_1", cfg.amplitude);
    for (k, v) in s.values().iter().enumerate().take(14) {
        println!("  k={:2} {:.3e}", k + 1, v / s1);
    }

    let grid = default_tau_grid();
    let r = 10;
    for n in ns {
        let rep = efficacy_study(&high, &low, r, n, 30, 7, &grid)?;
        let ratios = rep.ratios();
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(0.0, f64::max);
        println!(
            "r={r} n={n:3}  true error {:.3e} (rel {:.3e})  mean ratio {:7.3}  min {:7.3}  max {:7.3}{}",
            rep.true_error,
            rep.true_error / rep.h_norm,
            rep.mean_ratio,
            min,
            max,
            if rep.undersampled { "  (n < r)" } else { "" }
        );
    }
    Ok(())
}
