//! `BFSM` binary and CSV snapshot files.
//!
//! Binary layout, all little-endian:
//!
//! | offset | size | field |
//! |---|---|---|
//! | 0 | 4 | magic `BFSM` |
//! | 4 | 4 | version `u32` = 1 |
//! | 8 | 8 | `dim` `u64` |
//! | 16 | 8 | `n_samples` `u64` |
//! | 24 | 8·dim·n | `f64` payload, column-major |
//!
//! Sample ids and free-form provenance live in a JSON sidecar next to the
//! binary file (`<path>.json`). CSV files carry the ids in their header row.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bifi::{SampleId, SnapshotMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const MAGIC: [u8; 4] = *b"BFSM";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Bfsm,
    Csv,
}

impl Format {
    /// `.csv` means CSV; anything else is binary.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Bfsm,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Bfsm => "bfsm",
            Format::Csv => "csv",
        }
    }
}

/// Contents of the JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub sample_ids: Vec<SampleId>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub provenance: serde_json::Value,
}

/// Path of the sidecar belonging to a snapshot file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn encode_bfsm(m: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m.as_slice().len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_bfsm(bytes: &[u8]) -> Result<Matrix> {
    let truncated = |expected: usize| Error::TruncatedPayload {
        expected: expected as u64,
        found: bytes.len() as u64,
    };
    if bytes.len() < 4 {
        return Err(truncated(HEADER_LEN));
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(truncated(HEADER_LEN));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::VersionUnsupported(version));
    }
    let dim = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let n = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let expected = dim
        .checked_mul(n)
        .and_then(|c| c.checked_mul(8))
        .and_then(|p| p.checked_add(HEADER_LEN as u64))
        .ok_or(Error::TruncatedPayload {
            expected: u64::MAX,
            found: bytes.len() as u64,
        })?;
    if (bytes.len() as u64) < expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: bytes.len() as u64,
        });
    }
    if (bytes.len() as u64) > expected {
        return Err(Error::Malformed {
            path: PathBuf::new(),
            reason: format!("{} trailing bytes after payload", bytes.len() as u64 - expected),
        });
    }
    let (rows, cols) = (dim as usize, n as usize);
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    let data: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(p) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry {
            row: p % rows,
            col: p / rows,
        });
    }
    Ok(Matrix::from_raw(rows, cols, data))
}

/// Writes `m` in the format implied by the extension of `path`.
pub fn write_snapshots(m: &SnapshotMatrix, path: &Path) -> Result<()> {
    write_snapshots_as(m, path, Format::from_path(path), &serde_json::Value::Null)
}

/// Writes the data file and its sidecar.
pub fn write_snapshots_as(
    m: &SnapshotMatrix,
    path: &Path,
    format: Format,
    provenance: &serde_json::Value,
) -> Result<()> {
    match format {
        Format::Bfsm => fs::write(path, encode_bfsm(m.data()))?,
        Format::Csv => fs::write(path, encode_csv(m)?)?,
    }
    let sidecar = Sidecar {
        sample_ids: m.sample_ids().to_vec(),
        provenance: provenance.clone(),
    };
    let mut f = fs::File::create(sidecar_path(path))?;
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Reads a snapshot file. Binary files take their ids from the sidecar when
/// one exists and fall back to column positions otherwise.
pub fn read_snapshots(path: &Path) -> Result<SnapshotMatrix> {
    let bytes = fs::read(path)?;
    let with_path = |e: Error| match e {
        Error::Malformed { reason, .. } => Error::Malformed {
            path: path.to_owned(),
            reason,
        },
        other => other,
    };
    match Format::from_path(path) {
        Format::Csv => decode_csv(&bytes).map_err(with_path),
        Format::Bfsm => {
            let data = decode_bfsm(&bytes).map_err(with_path)?;
            match read_sidecar(path)? {
                Some(sc) => SnapshotMatrix::new(data, sc.sample_ids),
                None => Ok(SnapshotMatrix::with_index_ids(data)),
            }
        }
    }
}

pub fn read_sidecar(path: &Path) -> Result<Option<Sidecar>> {
    let sp = sidecar_path(path);
    if !sp.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&sp)?;
    Ok(Some(serde_json::from_str(&text)?))
}

/// Shortest representation that parses back to the same value.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn encode_csv(m: &SnapshotMatrix) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.sample_ids().iter().map(|s| s.0.as_str()))?;
    let data = m.data();
    for i in 0..data.rows() {
        w.write_record((0..data.cols()).map(|j| format_f64(data[(i, j)])))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn decode_csv(bytes: &[u8]) -> Result<SnapshotMatrix> {
    let malformed = |reason: String| Error::Malformed {
        path: PathBuf::new(),
        reason,
    };
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let ids: Vec<SampleId> = r.headers()?.iter().map(SampleId::from).collect();
    let cols = ids.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != cols {
            return Err(malformed(format!("row {i} has {} fields, expected {cols}", rec.len())));
        }
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let v: f64 = s
                    .parse()
                    .map_err(|_| malformed(format!("row {i}, column {j}: cannot parse {s:?}")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteEntry { row: i, col: j })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() || cols == 0 {
        return Err(Error::EmptyMatrix {
            rows: rows.len(),
            cols,
        });
    }
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    SnapshotMatrix::new(Matrix::from_rows(&refs)?, ids)
}
