//! Asymptotic positivity, separability, and entanglement criteria.
//!
//! Every criterion here is a statement about the limiting law of a block
//! matrix: positivity of a modified law's support certifies PPT or
//! separability, while a witness built from the support of a convolution
//! power certifies entanglement. Verdicts carry a signed margin and use a
//! tolerance band around zero, since a support edge resting exactly at the
//! origin is not decidable numerically.

use super::laws::{delta_minus_measure, delta_plus_measure, gamma_measure};
use super::report::{CriterionOutcome, Verdict};
use super::CriteriaError;
use crate::freeconv::support_edges;
use crate::spectra::{mean_var, moments, MeasureExpr};

/// Relative width of the inconclusive band around a zero margin.
const VERDICT_TOL: f64 = 1e-9;

fn support_tol(scale: f64) -> f64 {
    VERDICT_TOL * (1.0 + scale.abs())
}

/// Rejects measures whose support dips below zero, since the criteria
/// presuppose the profile of a positive semidefinite matrix.
fn require_state_profile(mu: &MeasureExpr) -> Result<(), CriteriaError> {
    let base = support_edges(mu, 1.0)?;
    if base.lo < -support_tol(base.hi) {
        return Err(CriteriaError::NotAStateProfile(base.lo));
    }
    Ok(())
}

/// PPT criterion: the partial-transpose law must have positive support.
///
/// The margin is the smallest support point of the modified law; a positive
/// margin certifies that the partial transpose is asymptotically positive
/// semidefinite.
pub fn ppt_verdict(mu: &MeasureExpr, n: usize) -> Result<CriterionOutcome, CriteriaError> {
    require_state_profile(mu)?;
    let law = gamma_measure(mu, n)?;
    let edges = support_edges(&law, 1.0)?;
    let detail = format!(
        "smallest support point of the partial-transpose law is {:.6e}",
        edges.lo
    );
    Ok(CriterionOutcome::from_margin(edges.lo, support_tol(edges.hi), detail))
}

/// Closed-form sufficient condition for the PPT criterion:
/// `n (m - 2 sigma) > B - A + 2 sigma` with `[A, B]` the support of `mu`.
pub fn ppt_bound(mu: &MeasureExpr, n: usize) -> Result<CriterionOutcome, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let (m, var) = mean_var(mu);
    let sigma = var.max(0.0).sqrt();
    let base = support_edges(mu, 1.0)?;
    let lhs = n as f64 * (m - 2.0 * sigma);
    let rhs = base.hi - base.lo + 2.0 * sigma;
    let detail = format!("n (m - 2 sigma) = {lhs:.6e} vs B - A + 2 sigma = {rhs:.6e}");
    let tol = VERDICT_TOL * (1.0 + lhs.abs() + rhs.abs());
    Ok(CriterionOutcome::from_strict_margin(lhs - rhs, tol, detail))
}

/// Separability margins from the two extremal depolarizing laws, as a
/// (delta-plus, delta-minus) pair. Positive support of either law certifies
/// asymptotic separability.
pub fn sep_verdicts(
    mu: &MeasureExpr,
    n: usize,
) -> Result<(CriterionOutcome, CriterionOutcome), CriteriaError> {
    let plus_edges = support_edges(&delta_plus_measure(mu, n)?, 1.0)?;
    let minus_edges = support_edges(&delta_minus_measure(mu, n)?, 1.0)?;
    let plus = CriterionOutcome::from_margin(
        plus_edges.lo,
        support_tol(plus_edges.hi),
        format!("smallest support point of the delta-plus law is {:.6e}", plus_edges.lo),
    );
    let minus = CriterionOutcome::from_margin(
        minus_edges.lo,
        support_tol(minus_edges.hi),
        format!("smallest support point of the delta-minus law is {:.6e}", minus_edges.lo),
    );
    Ok((plus, minus))
}

/// Combined sufficient-separability verdict: holds when either depolarizing
/// law has positive support; the margin is the better of the two.
pub fn sep_verdict(mu: &MeasureExpr, n: usize) -> Result<CriterionOutcome, CriteriaError> {
    let (plus, minus) = sep_verdicts(mu, n)?;
    let margin = plus.margin.unwrap_or(f64::NEG_INFINITY).max(minus.margin.unwrap_or(f64::NEG_INFINITY));
    let verdict = if plus.verdict == Verdict::Holds || minus.verdict == Verdict::Holds {
        Verdict::Holds
    } else if plus.verdict == Verdict::Fails && minus.verdict == Verdict::Fails {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    let detail = format!("{}; {}", plus.detail, minus.detail);
    Ok(CriterionOutcome { verdict, margin: Some(margin), detail })
}

/// Closed-form sufficient conditions for the two separability margins:
/// `(n^2+n-1) A > B + m (n^2-2) + 2 sigma sqrt(n^2-2)` and
/// `A > (n^2-2)(B - m) + 2 sigma sqrt(n^2-2)`.
pub fn sep_bounds(
    mu: &MeasureExpr,
    n: usize,
) -> Result<(CriterionOutcome, CriterionOutcome), CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let nf = n as f64;
    let (m, var) = mean_var(mu);
    let sigma = var.max(0.0).sqrt();
    let base = support_edges(mu, 1.0)?;
    let (a, b) = (base.lo, base.hi);
    let spread = 2.0 * sigma * (nf * nf - 2.0).sqrt();

    let plus_lhs = (nf * nf + nf - 1.0) * a;
    let plus_rhs = b + m * (nf * nf - 2.0) + spread;
    let plus = CriterionOutcome::from_strict_margin(
        plus_lhs - plus_rhs,
        VERDICT_TOL * (1.0 + plus_lhs.abs() + plus_rhs.abs()),
        format!(
            "(n^2+n-1) A = {plus_lhs:.6e} vs B + m (n^2-2) + 2 sigma sqrt(n^2-2) = {plus_rhs:.6e}"
        ),
    );

    let minus_lhs = a;
    let minus_rhs = (nf * nf - 2.0) * (b - m) + spread;
    let minus = CriterionOutcome::from_strict_margin(
        minus_lhs - minus_rhs,
        VERDICT_TOL * (1.0 + minus_lhs.abs() + minus_rhs.abs()),
        format!(
            "A = {minus_lhs:.6e} vs (n^2-2)(B - m) + 2 sigma sqrt(n^2-2) = {minus_rhs:.6e}"
        ),
    );
    Ok((plus, minus))
}

/// Asymptotic k-block-positivity: the convolution power `mu^{boxplus n/k}`
/// must have positive support.
pub fn k_positive(mu: &MeasureExpr, n: usize, k: usize) -> Result<CriterionOutcome, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    if k == 0 || k > n {
        return Err(CriteriaError::BadRank { k, n });
    }
    let t = n as f64 / k as f64;
    let edges = support_edges(mu, t)?;
    let detail = format!(
        "smallest support point of the convolution power mu^(boxplus {t:.4}) is {:.6e}",
        edges.lo
    );
    Ok(CriterionOutcome::from_margin(edges.lo, support_tol(edges.hi), detail))
}

/// Limit of the normalized S(k) operator norm:
/// `(k/n) * max(|minsupp|, |maxsupp|)` of `mu^{boxplus n/k}`.
pub fn sk_norm_limit(mu: &MeasureExpr, n: usize, k: usize) -> Result<f64, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    if k == 0 || k > n {
        return Err(CriteriaError::BadRank { k, n });
    }
    let t = n as f64 / k as f64;
    let edges = support_edges(mu, t)?;
    Ok((k as f64 / n as f64) * edges.lo.abs().max(edges.hi.abs()))
}

/// Limiting normalized S(k) norm of a random projection of rank `rho * n d`.
pub fn projection_sk(rho: f64, n: usize, k: usize) -> Result<f64, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    if k == 0 || k > n {
        return Err(CriteriaError::BadRank { k, n });
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CriteriaError::BadProjectionDensity(rho));
    }
    let r = k as f64 / n as f64;
    if rho > 1.0 - r {
        return Ok(1.0);
    }
    Ok(rho + r - 2.0 * rho * r + 2.0 * (r * (1.0 - r) * rho * (1.0 - rho)).sqrt())
}

/// Entanglement witness criterion: `maxsupp(mu^{boxplus n}) / n < m2/m1`
/// leaves room for a shift `beta` whose witness `beta I - X` separates the
/// matrix from the separable cone.
pub fn ent_witness(mu: &MeasureExpr, n: usize) -> Result<CriterionOutcome, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let ms = moments(mu, 2)?;
    let (m1, m2) = (ms.get(1), ms.get(2));
    if m1 <= 0.0 {
        return Err(CriteriaError::NonPositiveMean(m1));
    }
    let edges = support_edges(mu, n as f64)?;
    let lower = edges.hi / n as f64;
    let upper = m2 / m1;
    let margin = upper - lower;
    let tol = VERDICT_TOL * (1.0 + lower.abs() + upper.abs());
    let detail = if margin > tol {
        format!("witness shift beta admissible in ({lower:.6e}, {upper:.6e})")
    } else {
        format!(
            "no admissible witness shift: maxsupp(mu^boxplus n)/n = {lower:.6e} \
             does not fall below m2/m1 = {upper:.6e}"
        )
    };
    Ok(CriterionOutcome::from_strict_margin(margin, tol, detail))
}

/// Closed-form sufficient condition for the witness criterion:
/// `B/m < 1 + n sigma^2/m^2 - 2 (sigma/m) sqrt(n-1)`.
pub fn ent_bound(mu: &MeasureExpr, n: usize) -> Result<CriterionOutcome, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let (m, var) = mean_var(mu);
    if m <= 0.0 {
        return Err(CriteriaError::NonPositiveMean(m));
    }
    let sigma = var.max(0.0).sqrt();
    let base = support_edges(mu, 1.0)?;
    let lhs = base.hi / m;
    let rhs = 1.0 + n as f64 * var / (m * m) - 2.0 * (sigma / m) * ((n as f64) - 1.0).sqrt();
    let tol = VERDICT_TOL * (1.0 + lhs.abs() + rhs.abs());
    let detail =
        format!("B/m = {lhs:.6e} vs 1 + n sigma^2/m^2 - 2 (sigma/m) sqrt(n-1) = {rhs:.6e}");
    Ok(CriterionOutcome::from_strict_margin(rhs - lhs, tol, detail))
}
