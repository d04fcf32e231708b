//! Composite beam: rank-1 bi-fidelity estimate versus the Euler–Bernoulli
//! model, and the error bound from a few extra high-fidelity runs.
//!
//! Usage: `cargo run --release --example beam_study [samples] [n]`

use bifid::bifi::lift;
use bifid::bound::{default_tau_grid, draw_columns, minimize_bound, GramianPair, LowFidelityTerms};
use bifid::id::build_id;
use bifid::linalg::spectral_norm;
use bifid::models::{beam_pair, BeamConfig};
use bifid::RankMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);

    let cfg = BeamConfig::default();
    let (high, low) = beam_pair(&cfg, count, 1)?;
    let (h, l) = (high.data(), low.data());

    let id = build_id(l, RankMode::Fixed(1))?;
    let est = lift(&id, h.select_columns(id.selected()))?.evaluate_all();
    let rel = |a: &[f64], b: &[f64]| {
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let n: f64 = a.iter().map(|x| x * x).sum();
        (d / n).sqrt()
    };
    let (mut bf, mut lf) = (Vec::new(), Vec::new());
    for j in 0..count {
        bf.push(rel(h.column(j), est.column(j)));
        lf.push(rel(h.column(j), l.column(j)));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("skeleton column: {}", low.sample_ids()[id.selected()[0]]);
    println!("mean relative error: low-fidelity {:.3e}, bi-fidelity {:.3e}", mean(&lf), mean(&bf));

    let true_err = spectral_norm(&h.sub(&est))?;
    let cols = draw_columns(0, 0, count, n);
    let g = GramianPair::from_columns(&h.select_columns(&cols), &l.select_columns(&cols), count)?;
    let terms = LowFidelityTerms::from_decomposition(l, &id)?;
    let rep = minimize_bound(&g, &terms, &default_tau_grid())?;
    println!(
        "n={n}: bound {:.3e} at k={} tau={:.3e}; true error {:.3e}; efficacy {:.2}",
        rep.best_rho,
        rep.best_k,
        rep.best_tau,
        true_err,
        rep.best_rho / true_err
    );
    Ok(())
}
