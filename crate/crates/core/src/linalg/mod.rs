//! Dense linear-algebra kernels.

mod eigen;
mod matrix;
mod qr;
mod svd;

pub use eigen::{
    lambda_max_symmetric, lambda_min_symmetric, symmetric_eigenvalues, Tridiagonal,
};
pub(crate) use eigen::lambda_max_unchecked;
pub use matrix::{dot, norm2, Matrix};
pub use qr::{pivoted_qr, PivotedQr, RankMode};
pub use svd::{pseudo_inverse, spectral_norm, svd, SingularSpectrum, Svd};
pub(crate) use svd::spectral_norm_unchecked;
