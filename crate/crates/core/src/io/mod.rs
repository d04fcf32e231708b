//! Snapshot files, decomposition files, report CSV and run configuration.

mod config;
mod report;
mod snapshot;

pub use config::{RunConfig, TauGridSpec, TauScale};
pub use report::{
    bound_csv_string, write_bound_csv, write_efficacy_csv, BOUND_HEADER, EFFICACY_HEADER,
};
pub use snapshot::{
    decode_bfsm, decode_csv, encode_bfsm, encode_csv, format_f64, read_sidecar, read_snapshots,
    sidecar_path, write_snapshots, write_snapshots_as, Format, Sidecar, HEADER_LEN, MAGIC, VERSION,
};

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bifi::SampleId;
use crate::error::{Error, Result};
use crate::id::InterpDecomposition;

/// A decomposition on disk, with the low-fidelity sample ids its columns
/// refer to. The summary fields are informational and ignored on read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdFile {
    pub rank: usize,
    pub residual_norm: f64,
    pub coeff_norm: f64,
    /// Ids of the skeleton columns, in skeleton order.
    pub skeleton_ids: Vec<SampleId>,
    pub sample_ids: Vec<SampleId>,
    pub decomposition: InterpDecomposition,
}

impl IdFile {
    pub fn new(id: InterpDecomposition, sample_ids: Vec<SampleId>) -> Result<Self> {
        if sample_ids.len() != id.n_samples() {
            return Err(Error::DimensionMismatch {
                what: "sample id count",
                expected: id.n_samples(),
                got: sample_ids.len(),
            });
        }
        Ok(IdFile {
            rank: id.rank(),
            residual_norm: id.residual_norm(),
            coeff_norm: id.coeff_norm(),
            skeleton_ids: crate::bifi::required_samples(&id, &sample_ids),
            sample_ids,
            decomposition: id,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let f: IdFile = serde_json::from_str(&text)?;
        f.decomposition.check_consistent()?;
        // re-derive so hand edits of the summary cannot disagree
        IdFile::new(f.decomposition, f.sample_ids)
    }
}
