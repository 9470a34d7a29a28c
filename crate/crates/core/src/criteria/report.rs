//! Report types for criterion evaluations.

use crate::spectra::MeasureExpr;
use serde::{Deserialize, Serialize};

/// Outcome of a single asymptotic criterion.
///
/// `Inconclusive` covers both margins inside the numerical tolerance band
/// and criteria whose inputs could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A verdict with its signed margin and a human-readable explanation.
///
/// The margin is positive when the criterion holds with room to spare and
/// negative when it fails; it is absent when the evaluation errored out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub verdict: Verdict,
    pub margin: Option<f64>,
    pub detail: String,
}

impl CriterionOutcome {
    /// Classifies a margin against a tolerance band: above it the criterion
    /// holds, below the negated tolerance it fails, inside it is too close
    /// to call.
    pub fn from_margin(margin: f64, tol: f64, detail: String) -> CriterionOutcome {
        let verdict = if margin > tol {
            Verdict::Holds
        } else if margin < -tol {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        };
        CriterionOutcome { verdict, margin: Some(margin), detail }
    }

    /// Two-way classification for criteria phrased as strict inequalities:
    /// anything short of a clear positive margin fails.
    pub fn from_strict_margin(margin: f64, tol: f64, detail: String) -> CriterionOutcome {
        let verdict = if margin > tol { Verdict::Holds } else { Verdict::Fails };
        CriterionOutcome { verdict, margin: Some(margin), detail }
    }
}

/// A named criterion entry in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub name: String,
    pub verdict: Verdict,
    pub margin: Option<f64>,
    pub detail: String,
}

/// A limiting normalized s(k) norm, when it could be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkNormEntry {
    pub k: usize,
    pub value: Option<f64>,
}

/// Dimension witness produced by the Schmidt-number feasibility rule.
///
/// `k_max` is the largest Schmidt number certified realizable at block
/// dimension n; `a` and `b` are witness parameters chosen in the middle of
/// the feasible region, absent when no k is feasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCertificate {
    pub k_max: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

/// Full evaluation of every criterion for one measure and block dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub n: usize,
    pub measure: MeasureExpr,
    pub criteria: Vec<CriterionEntry>,
    pub sk_norms: Vec<SkNormEntry>,
    pub schmidt: SchmidtCertificate,
}

impl CriterionReport {
    /// True when no criterion reached a definite verdict, the signal for the
    /// distinct exit status of the command-line driver.
    pub fn all_inconclusive(&self) -> bool {
        self.criteria.iter().all(|c| c.verdict == Verdict::Inconclusive)
    }
}
