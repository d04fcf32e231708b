//! Interpolative decomposition of a low-rank-ish matrix at a range of
//! ranks, and in tolerance mode.
//!
//! Usage: `cargo run --example decompose_snapshots`

use bifid::id::build_id;
use bifid::linalg::svd;
use bifid::{Matrix, RankMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // smooth kernel matrix: singular values decay fast
    let l = Matrix::from_fn(30, 80, |i, j| {
        let x = i as f64 / 29.0;
        let y = j as f64 / 79.0;
        1.0 / (1.0 + 4.0 * (x - y).powi(2))
    });
    let s = svd(&l)?.s;
    println!(" r   residual    sigma_(r+1)   ||C_L||   min-norm");
    for r in 1..=10 {
        let id = build_id(&l, RankMode::Fixed(r))?;
        println!(
            "{r:2}   {:.3e}   {:.3e}   {:7.3}   {}",
            id.residual_norm(),
            s.sigma(r + 1),
            id.coeff_norm(),
            id.used_min_norm_solve()
        );
    }
    let tol = 1e-8 * s.largest();
    let id = build_id(&l, RankMode::Tolerance(tol))?;
    println!("tolerance {tol:.1e}: rank {}, columns {:?}", id.rank(), id.selected());
    Ok(())
}
