//! The `bifid` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//! Results go to files named by `--out` (or stdout for short summaries);
//! diagnostics go to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bifi::{lift_by_id, SampleId, SnapshotMatrix};
use crate::bound::{
    draw_columns, efficacy_study, minimize_bound_two_tau_with, minimize_bound_with, GramianPair,
    LowFidelityTerms, Sweep,
};
use crate::error::{Error, ErrorKind, Result};
use crate::id::build_id;
use crate::io::{
    read_snapshots, write_bound_csv, write_efficacy_csv, write_snapshots_as, Format, IdFile,
    RunConfig, TauGridSpec, TauScale,
};
use crate::models::{
    beam_hifi_substitute, beam_lofi, diffusion_solve, draw_samples, snapshot_matrix, BeamConfig,
    DiffusionConfig, ParameterSample,
};

#[derive(Debug, Parser)]
#[command(name = "bifid", version, about = "Bi-fidelity low-rank approximation and its error bound")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolative decomposition of the low-fidelity snapshots.
    Decompose(DecomposeArgs),
    /// Sample ids whose high-fidelity runs a decomposition needs.
    Samples(SamplesArgs),
    /// Extract columns of a snapshot file by id or at random.
    Select(SelectArgs),
    /// Apply a decomposition to high-fidelity skeleton columns.
    Lift(LiftArgs),
    /// Estimate the bi-fidelity error bound from subsampled high-fidelity columns.
    Bound(BoundArgs),
    /// Ratio of the estimated bound to the true error over repeated subsamples.
    Efficacy(EfficacyArgs),
    /// Generate paired snapshot files from a built-in model.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Target rank of the decomposition.
    #[arg(long, conflicts_with = "tol")]
    pub rank: Option<usize>,
    /// Spectral-norm tolerance on the low-fidelity residual.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TauArgs {
    #[arg(long, default_value_t = 1e-6)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1e6)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 200)]
    pub tau_count: usize,
    #[arg(long, value_enum, default_value_t = TauScale::Log)]
    pub tau_scale: TauScale,
    /// Do not prepend τ = 0 to a log grid.
    #[arg(long)]
    pub no_tau_zero: bool,
}

impl TauArgs {
    fn spec(&self) -> TauGridSpec {
        TauGridSpec {
            min: self.tau_min,
            max: self.tau_max,
            count: self.tau_count,
            scale: self.tau_scale,
            include_zero: !self.no_tau_zero,
        }
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Low-fidelity snapshot file.
    #[arg(long)]
    pub low: PathBuf,
    #[command(flatten)]
    pub rank: RankArgs,
    /// Decomposition JSON to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SamplesArgs {
    /// Decomposition JSON.
    #[arg(long)]
    pub id: PathBuf,
    /// Write the ids here, one per line, instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Snapshot file to draw from.
    #[arg(long)]
    pub from: PathBuf,
    /// File with one sample id per line.
    #[arg(long, conflicts_with = "n")]
    pub ids: Option<PathBuf>,
    /// Number of columns drawn uniformly without replacement.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    /// Decomposition JSON.
    #[arg(long)]
    pub id: PathBuf,
    /// High-fidelity snapshots holding at least the skeleton samples.
    #[arg(long)]
    pub high_skeleton: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Full low-fidelity snapshot file.
    #[arg(long)]
    pub low: PathBuf,
    /// High-fidelity snapshots of the subsampled columns only.
    #[arg(long)]
    pub high_sub: PathBuf,
    /// Decomposition JSON; alternatively give --rank or --tol.
    #[arg(long, conflicts_with_all = ["rank", "tol"])]
    pub id: Option<PathBuf>,
    #[command(flatten)]
    pub rank: RankArgs,
    #[command(flatten)]
    pub tau: TauArgs,
    /// Minimize the two terms of the bound over independent τ values.
    #[arg(long)]
    pub two_tau: bool,
    /// Evaluate the τ grid on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Report CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EfficacyArgs {
    #[arg(long)]
    pub high: PathBuf,
    #[arg(long)]
    pub low: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub rank: usize,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 30)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tau: TauArgs,
    /// Per-trial table CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Beam,
    Diffusion,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub model: ModelName,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Bfsm)]
    pub format: Format,
    /// Beam: output points along the top cord.
    #[arg(long)]
    pub n_grid: Option<usize>,
    /// Beam: multiplier on the shear correction.
    #[arg(long)]
    pub shear_scale: Option<f64>,
    /// Diffusion: coarse mesh nodes.
    #[arg(long)]
    pub mesh_low: Option<usize>,
    /// Diffusion: fine mesh nodes.
    #[arg(long)]
    pub mesh_high: Option<usize>,
    /// Diffusion: number of random modes.
    #[arg(long)]
    pub d_params: Option<usize>,
    /// Diffusion: log-coefficient amplitude.
    #[arg(long)]
    pub amplitude: Option<f64>,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Numerical => 3,
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Decompose(a) => decompose(a),
        Command::Samples(a) => samples(a),
        Command::Select(a) => select(a),
        Command::Lift(a) => lift_cmd(a),
        Command::Bound(a) => bound(a),
        Command::Efficacy(a) => efficacy(a),
        Command::Generate(a) => generate(a),
    }
}

fn rank_mode(r: &RankArgs) -> Result<crate::linalg::RankMode> {
    RunConfig {
        rank: r.rank,
        tolerance: r.tol,
        ..Default::default()
    }
    .rank_mode()
}

fn out_format(path: &Path, flag: Option<Format>) -> Format {
    flag.unwrap_or_else(|| Format::from_path(path))
}

fn decompose(a: DecomposeArgs) -> Result<()> {
    let mode = rank_mode(&a.rank)?;
    let low = read_snapshots(&a.low)?;
    let id = build_id(low.data(), mode)?;
    let file = IdFile::new(id, low.sample_ids().to_vec())?;
    file.write(&a.out)?;
    println!(
        "rank {} residual {:e} coeff_norm {:e}",
        file.rank, file.residual_norm, file.coeff_norm
    );
    println!(
        "skeleton {}",
        file.skeleton_ids.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(",")
    );
    Ok(())
}

fn samples(a: SamplesArgs) -> Result<()> {
    let file = IdFile::read(&a.id)?;
    let mut text = String::new();
    for id in &file.skeleton_ids {
        text.push_str(&id.0);
        text.push('\n');
    }
    match a.out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_id_list(path: &Path) -> Result<Vec<SampleId>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(SampleId::from)
        .collect())
}

fn select(a: SelectArgs) -> Result<()> {
    let src = read_snapshots(&a.from)?;
    let (picked, how) = match (&a.ids, a.n) {
        (Some(p), None) => (src.columns_by_id(&read_id_list(p)?)?, json!({"ids_from": p})),
        (None, Some(n)) => {
            if n == 0 || n > src.n_samples() {
                return Err(Error::InvalidConfig(format!(
                    "--n must lie in 1..={}",
                    src.n_samples()
                )));
            }
            let cols = draw_columns(a.seed, 0, src.n_samples(), n);
            (src.select(&cols), json!({"random": n, "seed": a.seed}))
        }
        _ => return Err(Error::InvalidConfig("give exactly one of --ids and --n".into())),
    };
    let prov = json!({"selected_from": a.from, "selection": how});
    write_snapshots_as(&picked, &a.out, out_format(&a.out, a.format), &prov)?;
    println!("{} columns written", picked.n_samples());
    Ok(())
}

fn lift_cmd(a: LiftArgs) -> Result<()> {
    let file = IdFile::read(&a.id)?;
    let high = read_snapshots(&a.high_skeleton)?;
    let model = lift_by_id(&file.decomposition, &file.sample_ids, &high)?;
    let est = SnapshotMatrix::new(model.evaluate_all(), file.sample_ids.clone())?;
    let prov = json!({"lifted": a.id, "high_skeleton": a.high_skeleton});
    write_snapshots_as(&est, &a.out, out_format(&a.out, a.format), &prov)?;
    println!("{} x {} estimate written", est.dim(), est.n_samples());
    Ok(())
}

fn bound(a: BoundArgs) -> Result<()> {
    let grid = a.tau.spec().grid()?;
    let low = read_snapshots(&a.low)?;
    let high_sub = read_snapshots(&a.high_sub)?;
    let id = match &a.id {
        Some(p) => {
            let f = IdFile::read(p)?;
            if f.sample_ids != low.sample_ids() {
                return Err(Error::SampleMismatch(
                    "decomposition was built on different low-fidelity samples".into(),
                ));
            }
            f.decomposition
        }
        None => build_id(low.data(), rank_mode(&a.rank)?)?,
    };
    let terms = LowFidelityTerms::from_decomposition(low.data(), &id)?;
    let g = GramianPair::from_subsample(&high_sub, &low)?;
    let sweep = if a.serial { Sweep::Serial } else { Sweep::Parallel };
    let report = if a.two_tau {
        minimize_bound_two_tau_with(&g, &terms, &grid, sweep)?
    } else {
        minimize_bound_with(&g, &terms, &grid, sweep)?
    };
    match &a.out {
        Some(p) => {
            let f = fs::File::create(p)?;
            write_bound_csv(&report, std::io::BufWriter::new(f))?;
            println!(
                "best_rho {:e} best_k {} best_tau {:e} n {} N {}",
                report.best_rho, report.best_k, report.best_tau, report.n_sub, report.n_total
            );
        }
        None => write_bound_csv(&report, std::io::stdout().lock())?,
    }
    Ok(())
}

fn efficacy(a: EfficacyArgs) -> Result<()> {
    let grid = a.tau.spec().grid()?;
    let high = read_snapshots(&a.high)?;
    let low = read_snapshots(&a.low)?;
    if a.rank == 0 {
        return Err(Error::ZeroRank);
    }
    let rep = efficacy_study(&high, &low, a.rank, a.n, a.trials, a.seed, &grid)?;
    if let Some(p) = &a.out {
        let f = fs::File::create(p)?;
        write_efficacy_csv(&rep, std::io::BufWriter::new(f))?;
    }
    let ratios = rep.ratios();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!(
        "r {} n {} trials {} true_error {:e} mean_ratio {} min {} max {}",
        rep.rank, rep.n_sub, a.trials, rep.true_error, rep.mean_ratio, min, max
    );
    if rep.undersampled {
        eprintln!("warning: n < r; the estimate need not be conservative");
    }
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    if a.samples == 0 {
        return Err(Error::InvalidConfig("--samples must be positive".into()));
    }
    fs::create_dir_all(&a.out_dir)?;
    let (high, low, samples, config, name): (_, _, Vec<ParameterSample>, serde_json::Value, &str) =
        match a.model {
            ModelName::Beam => {
                let mut cfg = BeamConfig::default();
                if let Some(n) = a.n_grid {
                    cfg.n_grid = n;
                }
                if let Some(s) = a.shear_scale {
                    cfg.shear_scale = s;
                }
                cfg.validate()?;
                let samples = draw_samples("beam", &cfg.input_ranges(), a.samples, a.seed);
                let high = snapshot_matrix(&samples, |s| beam_hifi_substitute(s, &cfg))?;
                let low = snapshot_matrix(&samples, |s| beam_lofi(s, &cfg))?;
                (high, low, samples, serde_json::to_value(&cfg)?, "beam")
            }
            ModelName::Diffusion => {
                let mut cfg = DiffusionConfig::default();
                if let Some(v) = a.mesh_low {
                    cfg.mesh_low = v;
                }
                if let Some(v) = a.mesh_high {
                    cfg.mesh_high = v;
                }
                if let Some(v) = a.d_params {
                    cfg.d_params = v;
                }
                if let Some(v) = a.amplitude {
                    cfg.amplitude = v;
                }
                cfg.validate()?;
                let samples = draw_samples("diffusion", &cfg.input_ranges(), a.samples, a.seed);
                let high = snapshot_matrix(&samples, |s| diffusion_solve(s, &cfg, cfg.mesh_high))?;
                let low = snapshot_matrix(&samples, |s| diffusion_solve(s, &cfg, cfg.mesh_low))?;
                (high, low, samples, serde_json::to_value(&cfg)?, "diffusion")
            }
        };
    let ext = a.format.extension();
    let high_path = a.out_dir.join(format!("high.{ext}"));
    let low_path = a.out_dir.join(format!("low.{ext}"));
    let prov = |fidelity: &str| json!({"model": name, "fidelity": fidelity, "seed": a.seed});
    write_snapshots_as(&high, &high_path, a.format, &prov("high"))?;
    write_snapshots_as(&low, &low_path, a.format, &prov("low"))?;
    let manifest = json!({
        "model": name,
        "config": config,
        "seed": a.seed,
        "samples": samples,
        "high": high_path.file_name().and_then(|s| s.to_str()),
        "low": low_path.file_name().and_then(|s| s.to_str()),
    });
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(a.out_dir.join("manifest.json"), text)?;
    println!(
        "{name}: {} samples, high {}x{}, low {}x{}",
        a.samples,
        high.dim(),
        high.n_samples(),
        low.dim(),
        low.n_samples()
    );
    Ok(())
}
