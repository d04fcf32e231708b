//! End-to-end runs of the `bifid` binary.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bifid::io::{read_snapshots, write_snapshots};
use bifid::SnapshotMatrix;
use common::*;

fn bifid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = bifid(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, model: &str, samples: usize, seed: u64) -> (PathBuf, PathBuf) {
    ok(&[
        "generate",
        model,
        "--samples",
        &samples.to_string(),
        "--seed",
        &seed.to_string(),
        "--out-dir",
        s(dir),
    ]);
    (dir.join("high.bfsm"), dir.join("low.bfsm"))
}

/// Last line of a report CSV, split into fields.
fn summary(csv: &str) -> Vec<String> {
    csv.lines().last().unwrap().split(',').map(str::to_owned).collect()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(bifid(&[]).status.code(), Some(1));
    assert_eq!(bifid(&["decompose"]).status.code(), Some(1));
    assert_eq!(bifid(&["frobnicate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let (_, low) = generate(dir.path(), "diffusion", 20, 0);
    let out = dir.path().join("id.json");
    // both or neither of --rank / --tol
    let both = bifid(&["decompose", "--low", s(&low), "--rank", "2", "--tol", "1e-3", "--out", s(&out)]);
    assert_eq!(both.status.code(), Some(1));
    let neither = bifid(&["decompose", "--low", s(&low), "--out", s(&out)]);
    assert_eq!(neither.status.code(), Some(1));
    let bad_tau = bifid(&["efficacy", "--high", s(&low), "--low", s(&low), "--tau-min", "-1"]);
    assert_eq!(bad_tau.status.code(), Some(1));
    assert_eq!(bifid(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.bfsm");
    std::fs::write(&junk, b"NOPE0000000000000000000000000000").unwrap();
    let out = dir.path().join("id.json");
    let r = bifid(&["decompose", "--low", s(&junk), "--rank", "1", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(2));
    let missing = dir.path().join("missing.bfsm");
    let r = bifid(&["decompose", "--low", s(&missing), "--rank", "1", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(2));
    let nan = dir.path().join("nan.csv");
    std::fs::write(&nan, "a,b\n1,NaN\n").unwrap();
    let r = bifid(&["decompose", "--low", s(&nan), "--rank", "1", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("row"));
}

#[test]
fn unreachable_tolerance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let low = dir.path().join("low.csv");
    let m = SnapshotMatrix::with_index_ids(gaussian(&mut rng(3), 4, 10));
    write_snapshots(&m, &low).unwrap();
    let out = dir.path().join("id.json");
    let r = bifid(&["decompose", "--low", s(&low), "--tol", "0", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn generate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    generate(a.path(), "beam", 100, 7);
    generate(b.path(), "beam", 100, 7);
    for name in ["high.bfsm", "low.bfsm", "high.bfsm.json", "low.bfsm.json", "manifest.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let h = read_snapshots(&a.path().join("high.bfsm")).unwrap();
    assert_eq!(h.n_samples(), 100);
}

#[test]
fn bound_on_identical_pair_with_full_sampling_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let (_, low) = generate(dir.path(), "diffusion", 40, 1);
    let l = read_snapshots(&low).unwrap();
    let rank = 14.to_string(); // interior nodes of the coarse mesh
    let csv = ok(&["bound", "--low", s(&low), "--high-sub", s(&low), "--rank", &rank]);
    let row = summary(&csv);
    assert_eq!(row.last().unwrap(), "best");
    let best: f64 = row[3].parse().unwrap();
    assert!(best <= 1e-8 * spectral_norm(l.data()), "{best}");
}

#[test]
fn efficacy_defaults_on_diffusion() {
    let dir = tempfile::tempdir().unwrap();
    let (high, low) = generate(dir.path(), "diffusion", 100, 0);
    let line = ok(&["efficacy", "--high", s(&high), "--low", s(&low)]);
    let mean: f64 = line
        .split_whitespace()
        .skip_while(|w| *w != "mean_ratio")
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.0..=10.0).contains(&mean), "{mean}");

    let report = dir.path().join("efficacy.csv");
    ok(&["efficacy", "--high", s(&high), "--low", s(&low), "--out", s(&report)]);
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), 1 + 30 + 1);
    let row = summary(&csv);
    assert_eq!(row[0], "mean");
    let from_csv: f64 = row.last().unwrap().parse().unwrap();
    assert!((from_csv - mean).abs() <= 1e-12 * mean);
}

#[test]
fn csv_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "generate", "beam", "--samples", "30", "--seed", "2", "--format", "csv", "--out-dir",
        s(dir.path()),
    ]);
    let low = dir.path().join("low.csv");
    let high = dir.path().join("high.csv");
    let id = dir.path().join("id.json");
    ok(&["decompose", "--low", s(&low), "--rank", "1", "--out", s(&id)]);
    let needed = dir.path().join("needed.txt");
    ok(&["samples", "--id", s(&id), "--out", s(&needed)]);
    assert_eq!(std::fs::read_to_string(&needed).unwrap().lines().count(), 1);
    let skel = dir.path().join("skel.csv");
    ok(&["select", "--from", s(&high), "--ids", s(&needed), "--out", s(&skel)]);
    let est = dir.path().join("est.csv");
    ok(&["lift", "--id", s(&id), "--high-skeleton", s(&skel), "--out", s(&est)]);
    let h = read_snapshots(&high).unwrap();
    let e = read_snapshots(&est).unwrap();
    assert_eq!(e.sample_ids(), h.sample_ids());
    let rel = spectral_norm(&h.data().sub(e.data())) / spectral_norm(h.data());
    assert!(rel < 0.1, "{rel}");

    let sub = dir.path().join("sub.csv");
    ok(&["select", "--from", s(&high), "--n", "8", "--seed", "4", "--out", s(&sub)]);
    let report = dir.path().join("bound.csv");
    ok(&[
        "bound", "--low", s(&low), "--high-sub", s(&sub), "--id", s(&id), "--tau-scale", "linear",
        "--tau-min", "0", "--tau-max", "100", "--tau-count", "11", "--out", s(&report),
    ]);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("k,tau,eps_hat,rho,valid"));
    let best: f64 = summary(&text)[3].parse().unwrap();
    assert!(best.is_finite() && best > 0.0);
}
