//! Finite-size random-matrix laboratory.
//!
//! Samplers for GUE, Wishart, and prescribed-spectrum invariant ensembles,
//! block-map application on bipartite matrices, norm estimators over
//! product vectors, and comparison of empirical spectra against predicted
//! limiting laws.

mod bipartite;
mod compare;
mod s1;
pub(crate) mod sample;
mod witness;

pub use bipartite::{apply_block_map, partial_transpose, BipartiteMatrix};
pub use compare::{compare, compare_eigs, histogram, SpectralComparison};
pub use s1::estimate_s1_norm;
pub use sample::{haar_unitary, rng_for, sample_gue, sample_invariant, sample_wishart};
pub use witness::schmidt_witness_overlap;

use crate::freeconv::ConvError;
use crate::linalg::LinalgError;
use crate::spectra::QuantileError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RmtError {
    #[error("matrix is not hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is {rows}x{cols}, expected square of size {n}*{d}")]
    BadFactorization { rows: usize, cols: usize, n: usize, d: usize },
    #[error("dimensions must be positive")]
    EmptyDimension,
    #[error("choi matrix is {rows}x{cols}, expected {n}^2 x {n}^2")]
    ChoiMismatch { rows: usize, cols: usize, n: usize },
    #[error("aspect ratio must be a positive finite number, got {0}")]
    BadAspectRatio(f64),
    #[error("alternating maximization needs at least 8 restarts, got {0}")]
    TooFewRestarts(usize),
    #[error("histogram needs at least one bin and a nonempty range")]
    BadHistogram,
    #[error("predicted density integrated to zero mass; cannot form quantiles")]
    DegenerateDensity,
    #[error(
        "prescribed-spectrum sampling needs closed-form quantiles; realize free \
         convolutions as sums of independently rotated samples instead: {0}"
    )]
    Quantile(#[from] QuantileError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Conv(#[from] ConvError),
}
