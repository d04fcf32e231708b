//! Lifting a low-fidelity interpolation rule to high-fidelity snapshots.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::InterpDecomposition;
use crate::linalg::{pseudo_inverse, Matrix};

/// Opaque identifier tying a column of `H` and of `L` to one parameter sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SampleId(pub String);

impl fmt::Display for SampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SampleId {
    fn from(s: &str) -> Self {
        SampleId(s.to_owned())
    }
}

impl From<String> for SampleId {
    fn from(s: String) -> Self {
        SampleId(s)
    }
}

/// One QoI vector per column, each column tagged with its sample id.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: Matrix,
    sample_ids: Vec<SampleId>,
}

impl SnapshotMatrix {
    pub fn new(data: Matrix, sample_ids: Vec<SampleId>) -> Result<Self> {
        if sample_ids.len() != data.cols() {
            return Err(Error::DimensionMismatch {
                what: "sample id count",
                expected: data.cols(),
                got: sample_ids.len(),
            });
        }
        let mut seen = HashSet::with_capacity(sample_ids.len());
        for id in &sample_ids {
            if !seen.insert(id) {
                return Err(Error::SampleMismatch(format!("duplicate sample id {id}")));
            }
        }
        Ok(SnapshotMatrix { data, sample_ids })
    }

    /// Ids `"0"`, `"1"`, ... by column position.
    pub fn with_index_ids(data: Matrix) -> Self {
        let ids = (0..data.cols()).map(|j| SampleId(j.to_string())).collect();
        SnapshotMatrix {
            data,
            sample_ids: ids,
        }
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn into_data(self) -> Matrix {
        self.data
    }

    pub fn sample_ids(&self) -> &[SampleId] {
        &self.sample_ids
    }

    /// Length of each QoI vector.
    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    pub fn n_samples(&self) -> usize {
        self.data.cols()
    }

    pub fn position(&self, id: &SampleId) -> Option<usize> {
        self.sample_ids.iter().position(|s| s == id)
    }

    /// Columns in the order of `ids`; every id must be present.
    pub fn columns_by_id(&self, ids: &[SampleId]) -> Result<SnapshotMatrix> {
        let index: HashMap<&SampleId, usize> = self
            .sample_ids
            .iter()
            .enumerate()
            .map(|(j, s)| (s, j))
            .collect();
        let cols = ids
            .iter()
            .map(|id| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::SampleMismatch(format!("sample {id} not present")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.select(&cols))
    }

    /// Columns at the given positions.
    pub fn select(&self, cols: &[usize]) -> SnapshotMatrix {
        SnapshotMatrix {
            data: self.data.select_columns(cols),
            sample_ids: cols.iter().map(|&j| self.sample_ids[j].clone()).collect(),
        }
    }

    /// Errors unless both matrices carry the same ids in the same order.
    pub fn check_aligned(&self, other: &SnapshotMatrix) -> Result<()> {
        if self.n_samples() != other.n_samples() {
            return Err(Error::SampleMismatch(format!(
                "{} samples vs {}",
                self.n_samples(),
                other.n_samples()
            )));
        }
        if let Some(j) = (0..self.n_samples()).find(|&j| self.sample_ids[j] != other.sample_ids[j])
        {
            return Err(Error::SampleMismatch(format!(
                "column {j}: {} vs {}",
                self.sample_ids[j], other.sample_ids[j]
            )));
        }
        Ok(())
    }
}

/// Sample ids whose high-fidelity runs the decomposition needs, in the order
/// of the skeleton columns.
pub fn required_samples(id: &InterpDecomposition, low_ids: &[SampleId]) -> Vec<SampleId> {
    id.selected().iter().map(|&j| low_ids[j].clone()).collect()
}

/// `Ĥ = H(r)·C_L` together with the decomposition it came from.
#[derive(Debug, Clone)]
pub struct BiFidelityModel {
    id: InterpDecomposition,
    high_skeleton: Matrix,
    sample_ids: Option<Vec<SampleId>>,
}

/// Pairs a decomposition with high-fidelity skeleton columns given in the
/// order of `id.selected()`.
pub fn lift(id: &InterpDecomposition, high_skeleton: Matrix) -> Result<BiFidelityModel> {
    if high_skeleton.cols() != id.rank() {
        return Err(Error::DimensionMismatch {
            what: "high-fidelity skeleton columns",
            expected: id.rank(),
            got: high_skeleton.cols(),
        });
    }
    high_skeleton.check_finite()?;
    Ok(BiFidelityModel {
        id: id.clone(),
        high_skeleton,
        sample_ids: None,
    })
}

/// Like [`lift`], but picks the skeleton columns out of `high` by sample id,
/// so the high-fidelity file may hold them in any order.
pub fn lift_by_id(
    id: &InterpDecomposition,
    low_ids: &[SampleId],
    high: &SnapshotMatrix,
) -> Result<BiFidelityModel> {
    if low_ids.len() != id.n_samples() {
        return Err(Error::DimensionMismatch {
            what: "low-fidelity sample ids",
            expected: id.n_samples(),
            got: low_ids.len(),
        });
    }
    let needed = required_samples(id, low_ids);
    let skel = high.columns_by_id(&needed)?;
    let mut model = lift(id, skel.into_data())?;
    model.sample_ids = Some(needed);
    Ok(model)
}

impl BiFidelityModel {
    pub fn decomposition(&self) -> &InterpDecomposition {
        &self.id
    }

    pub fn high_skeleton(&self) -> &Matrix {
        &self.high_skeleton
    }

    /// Ids of the skeleton columns when the model was lifted by id.
    pub fn sample_ids(&self) -> Option<&[SampleId]> {
        self.sample_ids.as_deref()
    }

    /// `M × N` bi-fidelity estimate of every sample.
    pub fn evaluate_all(&self) -> Matrix {
        self.high_skeleton.matmul(self.id.coeffs())
    }

    /// `Σ_ℓ H(r)[:, ℓ] c_ℓ`.
    pub fn evaluate_one(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.id.rank() {
            return Err(Error::DimensionMismatch {
                what: "coefficient vector length",
                expected: self.id.rank(),
                got: c.len(),
            });
        }
        Ok(self.high_skeleton.mul_vec(c))
    }

    /// Coefficients for a new low-fidelity vector: least-squares fit onto the
    /// low-fidelity skeleton.
    pub fn coefficients_for(&self, low: &[f64]) -> Result<Vec<f64>> {
        let skel = self.id.skeleton();
        if low.len() != skel.rows() {
            return Err(Error::DimensionMismatch {
                what: "low-fidelity vector length",
                expected: skel.rows(),
                got: low.len(),
            });
        }
        if let Some(p) = low.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { row: p, col: 0 });
        }
        Ok(pseudo_inverse(skel, crate::id::PINV_CUTOFF)?.mul_vec(low))
    }

    /// High-fidelity estimate at an out-of-sample parameter, given only its
    /// low-fidelity QoI.
    pub fn predict(&self, low: &[f64]) -> Result<Vec<f64>> {
        let c = self.coefficients_for(low)?;
        self.evaluate_one(&c)
    }
}
