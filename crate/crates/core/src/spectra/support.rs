//! Closed-form supports.

use super::measure::MeasureExpr;
use serde::{Deserialize, Serialize};

/// How a support interval was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    /// Closed form or an edge search that converged to full precision.
    Exact,
    /// An interval guaranteed to contain the support, not necessarily tight.
    OuterBound,
    /// Read off sampled or grid data; precision limited by the resolution.
    MonteCarlo,
}

/// The convex hull `[lo, hi]` of the support of a measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
    pub kind: SupportKind,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64, kind: SupportKind) -> Self {
        SupportInterval { lo, hi, kind }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// True when `other` lies inside this interval, allowing `tol` slack at
    /// both ends.
    pub fn encloses(&self, other: &SupportInterval, tol: f64) -> bool {
        self.lo - tol <= other.lo && other.hi <= self.hi + tol
    }
}

/// Support of the measure when the tree admits a closed form, `None` when a
/// free convolution node makes the edges a genuine computation (use
/// `freeconv::support_edges` for those).
pub fn exact_support(mu: &MeasureExpr) -> Option<SupportInterval> {
    let (lo, hi) = hull(mu)?;
    Some(SupportInterval::new(lo, hi, SupportKind::Exact))
}

fn hull(mu: &MeasureExpr) -> Option<(f64, f64)> {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => Some((mean - 2.0 * sigma, mean + 2.0 * sigma)),
        MeasureExpr::MarchenkoPastur { c } => {
            let r = c.sqrt();
            let lo = if *c < 1.0 { 0.0 } else { (1.0 - r) * (1.0 - r) };
            Some((lo, (1.0 + r) * (1.0 + r)))
        }
        MeasureExpr::Atomic { atoms } => {
            let lo = atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
            let hi = atoms.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
            Some((lo, hi))
        }
        MeasureExpr::Dilate { t, of } => {
            let (lo, hi) = hull(of)?;
            if *t >= 0.0 {
                Some((t * lo, t * hi))
            } else {
                Some((t * hi, t * lo))
            }
        }
        MeasureExpr::Shift { s, of } => {
            let (lo, hi) = hull(of)?;
            Some((lo + s, hi + s))
        }
        MeasureExpr::FreeConv { .. } => None,
    }
}
