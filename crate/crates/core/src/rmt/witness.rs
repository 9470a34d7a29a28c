//! Overlap statistic behind the Schmidt-number witnesses.
//!
//! For a GUE sample G on nd dimensions, the witness pair `C = b I + G` and
//! `X = a I - G` has normalized overlap
//! `Tr[(b I + G)(a I - G)]/(nd) = ab + (a - b) Tr(G)/(nd) - Tr(G^2)/(nd)`,
//! which converges to `ab - 1`. A negative limit certifies that the witness
//! detects Schmidt number above the design rank.

use super::RmtError;
use crate::rmt::sample::rng_for;
use rand::Rng;
use rand_distr::StandardNormal;

/// Computes the normalized witness overlap for one GUE draw without storing
/// the matrix: only the trace and squared Frobenius norm are accumulated,
/// with entries generated in the same order as `sample_gue`.
pub fn schmidt_witness_overlap(
    n: usize,
    d: usize,
    a: f64,
    b: f64,
    seed: u64,
) -> Result<f64, RmtError> {
    if n == 0 || d == 0 {
        return Err(RmtError::EmptyDimension);
    }
    let dim = n * d;
    let mut rng = rng_for(seed, 0);
    let diag_scale = 1.0 / (dim as f64).sqrt();
    let off_scale = 1.0 / (2.0 * dim as f64).sqrt();
    let mut trace = 0.0f64;
    let mut frobenius_sq = 0.0f64;
    for j in 0..dim {
        let g: f64 = rng.sample(StandardNormal);
        let entry = g * diag_scale;
        trace += entry;
        frobenius_sq += entry * entry;
        for _ in j + 1..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let norm_sq = (re * off_scale).powi(2) + (im * off_scale).powi(2);
            frobenius_sq += 2.0 * norm_sq;
        }
    }
    let dimf = dim as f64;
    Ok(a * b + (a - b) * trace / dimf - frobenius_sq / dimf)
}
