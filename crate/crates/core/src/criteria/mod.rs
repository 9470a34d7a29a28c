//! Entanglement criteria evaluated on limiting spectral laws.
//!
//! The inputs are a compactly supported law `mu` describing the eigenvalue
//! profile of a large block matrix and the block dimension `n`. Each
//! criterion reduces a positivity or separability question about the matrix
//! to a support or moment computation on a free-convolution modification of
//! `mu`.

mod choi;
mod laws;
mod report;
mod schmidt;
mod verdicts;

pub use choi::{
    check_unitarity, depolarizing_minus_choi, depolarizing_plus_choi, identity_choi,
    transpose_choi, ChoiSpec, DEFAULT_GROUP_TOL,
};
pub use laws::{delta_minus_measure, delta_plus_measure, gamma_measure, modified_measure};
pub use report::{
    CriterionEntry, CriterionOutcome, CriterionReport, SchmidtCertificate, SkNormEntry, Verdict,
};
pub use schmidt::{schmidt_feasibility, schmidt_k_feasible};
pub use verdicts::{
    ent_bound, ent_witness, k_positive, ppt_bound, ppt_verdict, projection_sk, sep_bounds,
    sep_verdict, sep_verdicts, sk_norm_limit,
};

use crate::freeconv::ConvError;
use crate::linalg::LinalgError;
use crate::spectra::{mean_var, MeasureError, MeasureExpr, SeriesError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("block dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("schmidt rank must satisfy 1 <= k <= n, got k = {k} with n = {n}")]
    BadRank { k: usize, n: usize },
    #[error("choi matrix must be {expect}x{expect}, got {rows}x{cols}")]
    ChoiShape { rows: usize, cols: usize, expect: usize },
    #[error("choi matrix is not hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("choi eigenvalue multiplicities sum to {got}, expected {expect}")]
    BadMultiplicity { got: usize, expect: usize },
    #[error("choi eigenvalue {0} is repeated or invalid")]
    BadEigenvalue(f64),
    #[error("choi eigenvalue {0} appears in more than one group")]
    DuplicateEigenvalue(f64),
    #[error(
        "eigenprojector at choi eigenvalue {lambda:.6} has partial trace deviating from a \
         multiple of the identity by {defect:.3e}; the map does not act on invariant ensembles"
    )]
    UnitarityViolation { lambda: f64, defect: f64 },
    #[error("measure has support below zero (smallest point {0:.6e}); not a state profile")]
    NotAStateProfile(f64),
    #[error("measure must have positive mean, got {0:.6e}")]
    NonPositiveMean(f64),
    #[error("projection density must lie strictly between 0 and 1, got {0}")]
    BadProjectionDensity(f64),
    #[error(transparent)]
    Conv(#[from] ConvError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn entry(name: &str, result: Result<CriterionOutcome, CriteriaError>) -> CriterionEntry {
    match result {
        Ok(outcome) => CriterionEntry {
            name: name.to_string(),
            verdict: outcome.verdict,
            margin: outcome.margin,
            detail: outcome.detail,
        },
        Err(err) => CriterionEntry {
            name: name.to_string(),
            verdict: Verdict::Inconclusive,
            margin: None,
            detail: format!("not evaluated: {err}"),
        },
    }
}

/// Runs every criterion on one law, recording per-criterion errors as
/// inconclusive entries instead of aborting.
///
/// `k_list` selects the Schmidt ranks for the S(k) norm limits. When the law
/// has zero variance the separability entries note that the degenerate
/// Gurvits-Barnum condition applies; for any other law it cannot.
pub fn evaluate_all(
    mu: &MeasureExpr,
    n: usize,
    k_list: &[usize],
) -> Result<CriterionReport, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let mu = mu.clone().validated()?;
    let (mean, var) = mean_var(&mu);
    let degenerate = var.abs() <= 1e-12 * (1.0 + mean * mean);

    let mut criteria = Vec::new();
    criteria.push(entry("ppt_gamma", ppt_verdict(&mu, n)));
    criteria.push(entry("ppt_bound_gamma", ppt_bound(&mu, n)));
    match sep_verdicts(&mu, n) {
        Ok((plus, minus)) => {
            criteria.push(entry("sep_delta_plus", Ok(plus)));
            criteria.push(entry("sep_delta_minus", Ok(minus)));
        }
        Err(err) => {
            let detail = format!("not evaluated: {err}");
            for name in ["sep_delta_plus", "sep_delta_minus"] {
                criteria.push(CriterionEntry {
                    name: name.to_string(),
                    verdict: Verdict::Inconclusive,
                    margin: None,
                    detail: detail.clone(),
                });
            }
        }
    }
    match sep_bounds(&mu, n) {
        Ok((plus, minus)) => {
            criteria.push(entry("sep_bound_plus", Ok(plus)));
            criteria.push(entry("sep_bound_minus", Ok(minus)));
        }
        Err(err) => {
            let detail = format!("not evaluated: {err}");
            for name in ["sep_bound_plus", "sep_bound_minus"] {
                criteria.push(CriterionEntry {
                    name: name.to_string(),
                    verdict: Verdict::Inconclusive,
                    margin: None,
                    detail: detail.clone(),
                });
            }
        }
    }
    criteria.push(entry("ent_witness", ent_witness(&mu, n)));
    criteria.push(entry("ent_bound", ent_bound(&mu, n)));

    if degenerate {
        for item in criteria.iter_mut() {
            if item.name.starts_with("sep_delta") {
                item.detail.push_str(
                    "; Gurvits-Barnum condition applies in the limit (zero-variance law)",
                );
            }
        }
    }

    let sk_norms = k_list
        .iter()
        .map(|&k| SkNormEntry { k, value: sk_norm_limit(&mu, n, k).ok() })
        .collect();

    let schmidt = schmidt_feasibility(n)?;

    Ok(CriterionReport { n, measure: mu, criteria, sk_norms, schmidt })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(report: &'a CriterionReport, name: &str) -> &'a CriterionEntry {
        report.criteria.iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn wide_mp_at_large_n_is_certified_ppt_entangled() {
        let mu = MeasureExpr::marchenko_pastur(4.0).unwrap();
        let report = evaluate_all(&mu, 20, &[1]).unwrap();
        assert_eq!(find(&report, "ppt_gamma").verdict, Verdict::Holds);
        assert_eq!(find(&report, "ent_witness").verdict, Verdict::Holds);
        assert_eq!(report.criteria.len(), 8);
        assert!(report.sk_norms[0].value.is_some());
    }

    #[test]
    fn the_same_mp_has_no_joint_certificate_at_seventeen() {
        let mu = MeasureExpr::marchenko_pastur(4.0).unwrap();
        let report = evaluate_all(&mu, 17, &[]).unwrap();
        let ppt = find(&report, "ppt_gamma").verdict == Verdict::Holds;
        let ent = find(&report, "ent_witness").verdict == Verdict::Holds;
        assert!(!(ppt && ent));
    }

    #[test]
    fn identity_profile_report_is_consistent_and_notes_the_degenerate_case() {
        let mu = MeasureExpr::point_mass(1.0).unwrap();
        let report = evaluate_all(&mu, 4, &[1, 2, 4]).unwrap();
        assert_eq!(find(&report, "sep_bound_plus").verdict, Verdict::Holds);
        assert_eq!(find(&report, "sep_bound_minus").verdict, Verdict::Holds);
        assert_eq!(find(&report, "ent_witness").verdict, Verdict::Fails);
        assert!(find(&report, "sep_delta_plus").detail.contains("Gurvits-Barnum"));
        assert!(!report.all_inconclusive());
    }

    #[test]
    fn nondegenerate_reports_do_not_mention_the_degenerate_condition() {
        let mu = MeasureExpr::marchenko_pastur(4.0).unwrap();
        let report = evaluate_all(&mu, 4, &[]).unwrap();
        for item in &report.criteria {
            assert!(!item.detail.contains("Gurvits-Barnum"));
        }
    }

    #[test]
    fn criterion_errors_become_inconclusive_entries() {
        // A centered semicircle is not a state profile, so the PPT and
        // witness criteria cannot run; the report must still assemble.
        let mu = MeasureExpr::semicircle(0.0, 1.0).unwrap();
        let report = evaluate_all(&mu, 3, &[1]).unwrap();
        let ppt = find(&report, "ppt_gamma");
        assert_eq!(ppt.verdict, Verdict::Inconclusive);
        assert!(ppt.detail.contains("not evaluated"));
        assert!(ppt.margin.is_none());
        let witness = find(&report, "ent_witness");
        assert_eq!(witness.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn out_of_range_ranks_yield_empty_norm_values() {
        let mu = MeasureExpr::point_mass(1.0).unwrap();
        let report = evaluate_all(&mu, 3, &[1, 9]).unwrap();
        assert!(report.sk_norms[0].value.is_some());
        assert!(report.sk_norms[1].value.is_none());
    }
}
