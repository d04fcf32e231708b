//! Writes a snapshot matrix as binary and CSV, reads both back and
//! compares.
//!
//! Usage: `cargo run --example file_roundtrip [dir]`

use std::path::PathBuf;

use bifid::io::{read_snapshots, write_snapshots_as, Format};
use bifid::models::{diffusion_pair, DiffusionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let (_, low) = diffusion_pair(&DiffusionConfig::default(), 12, 9)?;
    let prov = serde_json::json!({ "model": "diffusion", "seed": 9 });
    for format in [Format::Bfsm, Format::Csv] {
        let path = dir.join(format!("roundtrip.{}", format.extension()));
        write_snapshots_as(&low, &path, format, &prov)?;
        let back = read_snapshots(&path)?;
        println!(
            "{}: {} bytes, identical: {}",
            path.display(),
            std::fs::metadata(&path)?.len(),
            back == low
        );
    }
    Ok(())
}
