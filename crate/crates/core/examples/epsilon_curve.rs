//! The estimate ε̂(τ) on the beam pair as the number of extra
//! high-fidelity samples grows.
//!
//! Usage: `cargo run --release --example epsilon_curve`

use bifid::bound::{draw_columns, epsilon_exact, GramianPair};
use bifid::models::{beam_pair, BeamConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (high, low) = beam_pair(&BeamConfig::default(), 200, 3)?;
    let taus = [0.0, 1e-2, 1.0, 1e2];
    print!("  n ");
    for t in taus {
        print!("  tau={t:<9.0e}");
    }
    println!();
    for n in 2..=12 {
        let cols = draw_columns(5, 0, 200, n);
        let g = GramianPair::from_columns(
            &high.data().select_columns(&cols),
            &low.data().select_columns(&cols),
            200,
        )?;
        print!("{n:3} ");
        for t in taus {
            print!("  {:<13.4e}", g.epsilon(t)?);
        }
        println!();
    }
    print!("all ");
    for t in taus {
        print!("  {:<13.4e}", epsilon_exact(&high, &low, t)?);
    }
    println!();
    Ok(())
}
