//! Limiting spectral distributions of block-modified unitarily invariant
//! random matrices, and the finite-size samplers to check them against.
//!
//! The crate is organized in four layers:
//!
//! * [`spectra`] - expression trees for compactly supported probability
//!   measures on the real line, together with moment/free-cumulant series,
//!   closed-form supports, densities and quantiles.
//! * [`freeconv`] - free additive convolution powers: support edges through
//!   the subordination/K-function machinery, atom persistence, and densities
//!   by Stieltjes inversion.
//! * [`criteria`] - block-modification laws (partial transpose and the
//!   depolarizing family, or any map given by its Choi matrix) and the
//!   positivity, separability, entanglement and Schmidt-number criteria
//!   they induce in the large-dimension limit.
//! * [`rmt`] - dense random matrix sampling (GUE, Wishart, rotated
//!   deterministic spectra), block operations such as the partial transpose,
//!   and estimators used to confront the limiting predictions at finite size.
//!
//! Everything is deterministic given the documented seeds.

pub mod criteria;
pub mod freeconv;
pub mod linalg;
pub mod rmt;
pub mod spectra;

pub use criteria::{
    check_unitarity, delta_minus_measure, delta_plus_measure, evaluate_all, gamma_measure,
    modified_measure, schmidt_feasibility, ChoiSpec, CriteriaError, CriterionReport, Verdict,
};
pub use freeconv::{
    atom_persistence, density, free_power, support_bound, support_edges, ConvError,
};
pub use linalg::{set_blas_threads, CMatrix, LinalgError};
pub use rmt::{
    apply_block_map, compare, estimate_s1_norm, haar_unitary, histogram, partial_transpose,
    sample_gue, sample_invariant, sample_wishart, BipartiteMatrix, RmtError,
};
pub use spectra::{
    cumulants, mean_var, moments, quantile, CumulantSeries, DensityProfile, MeasureError,
    MeasureExpr, MomentSeries, SupportInterval, SupportKind, MAX_ORDER,
};
