//! Schmidt-number feasibility from PPT spectra.
//!
//! A shifted Wishart-type block matrix stays PPT while its Schmidt number
//! exceeds k whenever witness parameters a > 2 and b with
//! `2 sqrt(k/n) < b < 1/a` exist. Such a pair exists exactly when
//! `2 sqrt(k/n) < 1/2`, i.e. 16 k < n, so the certified Schmidt number at
//! block dimension n is the largest such k.

use super::report::SchmidtCertificate;
use super::CriteriaError;

/// Whether witness parameters exist certifying Schmidt number above `k` at
/// block dimension `n`. Exact integer form of `k < n/16`.
pub fn schmidt_k_feasible(n: usize, k: usize) -> bool {
    k >= 1 && 16 * k < n
}

/// Largest certifiable Schmidt number at block dimension `n` together with
/// midpoint witness parameters.
///
/// The feasible region for `b` is the open interval `(2 sqrt(k/n), 1/2)`;
/// `b` is chosen at its midpoint and `a` halfway between the constraints
/// `a > 2` and `a < 1/b`, keeping every inequality strict with room to
/// spare. Below n = 17 no k is feasible and the witness parameters are
/// absent.
pub fn schmidt_feasibility(n: usize) -> Result<SchmidtCertificate, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let k_max = (n - 1) / 16;
    if k_max == 0 {
        return Ok(SchmidtCertificate { k_max: 0, a: None, b: None });
    }
    debug_assert!(schmidt_k_feasible(n, k_max) && !schmidt_k_feasible(n, k_max + 1));
    let lower = 2.0 * (k_max as f64 / n as f64).sqrt();
    let b = 0.5 * (lower + 0.5);
    let a = 0.5 * (2.0 + 1.0 / b);
    debug_assert!(a > 2.0 && a * b < 1.0 && b > lower);
    Ok(SchmidtCertificate { k_max, a: Some(a), b: Some(b) })
}
