//! Bi-fidelity low-rank approximation of parametric snapshot ensembles.
//!
//! A cheap low-fidelity snapshot matrix `L` is compressed with an
//! interpolative decomposition `L ≈ L(r)·C_L`. The same coefficients applied
//! to the high-fidelity counterparts of the selected columns give the
//! bi-fidelity estimate `Ĥ = H(r)·C_L`, so the expensive model runs only `r`
//! times. The [`bound`] module estimates `‖H − Ĥ‖` from a handful of extra
//! high-fidelity samples.
//!
//! Module map:
//!
//! - [`linalg`]: dense kernels (pivoted QR, SVD, symmetric eigenvalues).
//! - [`id`]: interpolative decomposition of the low-fidelity snapshots.
//! - [`bifi`]: lifting the decomposition to high-fidelity data.
//! - [`bound`]: the ε(τ) machinery, the ρ_k(τ) bound and its grid search.
//! - [`models`]: built-in model pairs (composite beam, 1-D diffusion).
//! - [`io`]: snapshot files, report CSV and run configuration.
//! - [`cli`]: the `bifid` command-line front end.

pub mod bifi;
pub mod bound;
pub mod cli;
pub mod error;
pub mod id;
pub mod io;
pub mod linalg;
pub mod models;

pub use bifi::{BiFidelityModel, SampleId, SnapshotMatrix};
pub use bound::{BoundReport, GramianPair};
pub use error::{Error, Result};
pub use id::InterpDecomposition;
pub use linalg::{Matrix, RankMode, SingularSpectrum};
