use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains a non-finite entry at ({row}, {col})")]
    NonFiniteInput { row: usize, col: usize },
    #[error("requested rank {rank} exceeds min(rows, cols) = {max}")]
    RankExceedsDims { rank: usize, max: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} did not converge within the iteration cap")]
    NoConvergence(&'static str),
    #[error("tolerance {tolerance:e} is unreachable; best residual at full rank is {best:e}")]
    ToleranceUnreachable { tolerance: f64, best: f64 },
    #[error("tolerance must be non-negative and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("sample mismatch: {0}")]
    SampleMismatch(String),
    #[error("tau must be non-negative and finite, got {0}")]
    NegativeTau(f64),
    #[error("k = {k} is outside 1..={rank}")]
    KOutOfRange { k: usize, rank: usize },
    #[error("every (k, tau) combination produced an invalid bound")]
    AllCombinationsInvalid,
    #[error("tau grid is empty")]
    EmptyGrid,
    #[error("true error {error:e} is below the noise floor {floor:e}; efficacy ratio is meaningless")]
    DegenerateError { error: f64, floor: f64 },
    #[error("parameter {name} = {value} is outside [{lo}, {hi}]")]
    OutOfBounds {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("linear solver failed: {0}")]
    SolverFailure(String),
    #[error("bad magic bytes {0:02x?}, expected \"BFSM\"")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot format version {0}")]
    VersionUnsupported(u32),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: u64, found: u64 },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("malformed file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Coarse category used for CLI exit codes.
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NoConvergence(_)
            | ToleranceUnreachable { .. }
            | AllCombinationsInvalid
            | DegenerateError { .. }
            | SolverFailure(_) => ErrorKind::Numerical,
            InvalidConfig(_) | InvalidTolerance(_) | NegativeTau(_) | EmptyGrid | ZeroRank => {
                ErrorKind::Usage
            }
            _ => ErrorKind::Data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
