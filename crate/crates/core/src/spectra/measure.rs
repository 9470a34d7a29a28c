//! Measure expression trees and their validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest moment or cumulant order the series routines accept. Beyond this
/// the partition-counting recursions lose too much precision in f64.
pub const MAX_ORDER: usize = 24;

/// Weights of an atomic measure may deviate from total mass one by at most
/// this much before the measure is rejected; smaller deviations are
/// renormalized away.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("semicircle width must be finite and nonnegative, got {0}")]
    BadSigma(f64),
    #[error("marchenko-pastur rate must be finite and positive, got {0}")]
    BadRate(f64),
    #[error("atomic measure needs at least one atom")]
    NoAtoms,
    #[error("atom weight must be finite and positive, got {0}")]
    BadWeight(f64),
    #[error("atom location must be finite, got {0}")]
    BadLocation(f64),
    #[error("atom locations must be distinct, {0} repeats")]
    DuplicateLocation(f64),
    #[error("atom weights sum to {0}, which is more than 1e-12 away from 1")]
    WeightSum(f64),
    #[error("dilation factor must be finite and nonzero, got {0}")]
    BadDilation(f64),
    #[error("shift must be finite, got {0}")]
    BadShift(f64),
    #[error("free convolution power must be a finite number >= 1, got {0}")]
    PowerBelowOne(f64),
    #[error("free convolution needs at least one term")]
    EmptyConvolution,
}

/// One `measure^{boxplus power}` factor inside a [`MeasureExpr::FreeConv`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvTerm {
    pub of: MeasureExpr,
    pub power: f64,
}

/// A compactly supported probability measure, as a tree of parametric laws
/// and measure operations.
///
/// The JSON form tags each node with `"type"`; for example
/// `{"type":"semicircle","mean":0.0,"sigma":1.0}` or
/// `{"type":"free_conv","terms":[{"of":...,"power":2.0}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureExpr {
    /// Semicircle law centered at `mean` with variance `sigma^2`, supported
    /// on `[mean - 2 sigma, mean + 2 sigma]`. `sigma = 0` degenerates to a
    /// point mass.
    Semicircle { mean: f64, sigma: f64 },
    /// Marchenko-Pastur law of rate `c > 0`: continuous part on
    /// `[(1 - sqrt(c))^2, (1 + sqrt(c))^2]` plus an atom of mass `1 - c` at
    /// the origin when `c < 1`.
    MarchenkoPastur { c: f64 },
    /// Finite convex combination of point masses, as `(location, weight)`
    /// pairs sorted by location.
    Atomic { atoms: Vec<(f64, f64)> },
    /// Pushforward under `x -> t * x`. Negative `t` reflects the measure.
    Dilate { t: f64, of: Box<MeasureExpr> },
    /// Pushforward under `x -> x + s`.
    Shift { s: f64, of: Box<MeasureExpr> },
    /// Free additive convolution of fractional convolution powers of the
    /// terms. Every power must be at least 1.
    FreeConv { terms: Vec<ConvTerm> },
}

impl MeasureExpr {
    pub fn semicircle(mean: f64, sigma: f64) -> Result<Self, MeasureError> {
        MeasureExpr::Semicircle { mean, sigma }.validated()
    }

    pub fn marchenko_pastur(c: f64) -> Result<Self, MeasureError> {
        MeasureExpr::MarchenkoPastur { c }.validated()
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self, MeasureError> {
        MeasureExpr::Atomic { atoms }.validated()
    }

    /// The point mass at `x`.
    pub fn point_mass(x: f64) -> Result<Self, MeasureError> {
        MeasureExpr::atomic(vec![(x, 1.0)])
    }

    pub fn dilate(t: f64, of: MeasureExpr) -> Result<Self, MeasureError> {
        MeasureExpr::Dilate { t, of: Box::new(of) }.validated()
    }

    pub fn shift(s: f64, of: MeasureExpr) -> Result<Self, MeasureError> {
        MeasureExpr::Shift { s, of: Box::new(of) }.validated()
    }

    pub fn free_conv(terms: Vec<(MeasureExpr, f64)>) -> Result<Self, MeasureError> {
        MeasureExpr::FreeConv {
            terms: terms
                .into_iter()
                .map(|(of, power)| ConvTerm { of, power })
                .collect(),
        }
        .validated()
    }

    /// Checks every parameter in the tree and puts atomic nodes into
    /// canonical form: atoms sorted by location, weights renormalized when
    /// their sum is within [`WEIGHT_SUM_TOL`] of 1.
    pub fn validated(self) -> Result<Self, MeasureError> {
        match self {
            MeasureExpr::Semicircle { mean, sigma } => {
                if !mean.is_finite() {
                    return Err(MeasureError::BadLocation(mean));
                }
                if !sigma.is_finite() || sigma < 0.0 {
                    return Err(MeasureError::BadSigma(sigma));
                }
                Ok(MeasureExpr::Semicircle { mean, sigma })
            }
            MeasureExpr::MarchenkoPastur { c } => {
                if !c.is_finite() || c <= 0.0 {
                    return Err(MeasureError::BadRate(c));
                }
                Ok(MeasureExpr::MarchenkoPastur { c })
            }
            MeasureExpr::Atomic { atoms } => {
                Ok(MeasureExpr::Atomic { atoms: canonical_atoms(atoms)? })
            }
            MeasureExpr::Dilate { t, of } => {
                if !t.is_finite() || t == 0.0 {
                    return Err(MeasureError::BadDilation(t));
                }
                Ok(MeasureExpr::Dilate { t, of: Box::new(of.validated()?) })
            }
            MeasureExpr::Shift { s, of } => {
                if !s.is_finite() {
                    return Err(MeasureError::BadShift(s));
                }
                Ok(MeasureExpr::Shift { s, of: Box::new(of.validated()?) })
            }
            MeasureExpr::FreeConv { terms } => {
                if terms.is_empty() {
                    return Err(MeasureError::EmptyConvolution);
                }
                let mut out = Vec::with_capacity(terms.len());
                for term in terms {
                    if !term.power.is_finite() || term.power < 1.0 {
                        return Err(MeasureError::PowerBelowOne(term.power));
                    }
                    out.push(ConvTerm { of: term.of.validated()?, power: term.power });
                }
                Ok(MeasureExpr::FreeConv { terms: out })
            }
        }
    }

    /// True when the tree contains no free convolution node, so that support,
    /// density and quantiles all have closed forms.
    pub fn is_closed_form(&self) -> bool {
        match self {
            MeasureExpr::Semicircle { .. }
            | MeasureExpr::MarchenkoPastur { .. }
            | MeasureExpr::Atomic { .. } => true,
            MeasureExpr::Dilate { of, .. } | MeasureExpr::Shift { of, .. } => of.is_closed_form(),
            MeasureExpr::FreeConv { .. } => false,
        }
    }

    /// Rewrites the tree into an equivalent, usually smaller one. All rules
    /// are exact: affine maps are pushed onto leaves, nested convolutions are
    /// flattened, convolution powers of semicircle / Marchenko-Pastur / point
    /// masses are collapsed into single leaves, and semicircle (resp. plain
    /// Marchenko-Pastur) terms of one convolution are merged.
    pub fn simplified(&self) -> MeasureExpr {
        match self {
            MeasureExpr::Semicircle { .. }
            | MeasureExpr::MarchenkoPastur { .. }
            | MeasureExpr::Atomic { .. } => self.clone(),
            MeasureExpr::Dilate { t, of } => dilate_simplified(*t, of.simplified()),
            MeasureExpr::Shift { s, of } => shift_simplified(*s, of.simplified()),
            MeasureExpr::FreeConv { terms } => {
                let parts: Vec<(MeasureExpr, f64)> = terms
                    .iter()
                    .map(|term| (term.of.simplified(), term.power))
                    .collect();
                conv_simplified(parts)
            }
        }
    }
}

fn canonical_atoms(mut atoms: Vec<(f64, f64)>) -> Result<Vec<(f64, f64)>, MeasureError> {
    if atoms.is_empty() {
        return Err(MeasureError::NoAtoms);
    }
    for &(x, w) in &atoms {
        if !x.is_finite() {
            return Err(MeasureError::BadLocation(x));
        }
        if !w.is_finite() || w <= 0.0 {
            return Err(MeasureError::BadWeight(w));
        }
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in atoms.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(MeasureError::DuplicateLocation(pair[0].0));
        }
    }
    let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(MeasureError::WeightSum(total));
    }
    if total != 1.0 {
        for atom in &mut atoms {
            atom.1 /= total;
        }
    }
    Ok(atoms)
}

fn dilate_simplified(t: f64, inner: MeasureExpr) -> MeasureExpr {
    if t == 1.0 {
        return inner;
    }
    match inner {
        MeasureExpr::Semicircle { mean, sigma } => MeasureExpr::Semicircle {
            mean: t * mean,
            sigma: t.abs() * sigma,
        },
        MeasureExpr::Atomic { atoms } => {
            let mut mapped: Vec<(f64, f64)> = atoms.into_iter().map(|(x, w)| (t * x, w)).collect();
            mapped.sort_by(|a, b| a.0.total_cmp(&b.0));
            MeasureExpr::Atomic { atoms: mapped }
        }
        MeasureExpr::Dilate { t: u, of } => dilate_simplified(t * u, *of),
        MeasureExpr::Shift { s, of } => shift_simplified(t * s, dilate_simplified(t, *of)),
        other => MeasureExpr::Dilate { t, of: Box::new(other) },
    }
}

fn shift_simplified(s: f64, inner: MeasureExpr) -> MeasureExpr {
    if s == 0.0 {
        return inner;
    }
    match inner {
        MeasureExpr::Semicircle { mean, sigma } => MeasureExpr::Semicircle { mean: mean + s, sigma },
        MeasureExpr::Atomic { atoms } => MeasureExpr::Atomic {
            atoms: atoms.into_iter().map(|(x, w)| (x + s, w)).collect(),
        },
        MeasureExpr::Shift { s: u, of } => shift_simplified(s + u, *of),
        other => MeasureExpr::Shift { s, of: Box::new(other) },
    }
}

/// A point mass, if the expression is one.
fn as_point_mass(expr: &MeasureExpr) -> Option<f64> {
    match expr {
        MeasureExpr::Atomic { atoms } if atoms.len() == 1 => Some(atoms[0].0),
        MeasureExpr::Semicircle { mean, sigma } if *sigma == 0.0 => Some(*mean),
        _ => None,
    }
}

fn conv_simplified(parts: Vec<(MeasureExpr, f64)>) -> MeasureExpr {
    // First flatten nested convolutions; powers multiply through.
    let mut flat: Vec<(MeasureExpr, f64)> = Vec::with_capacity(parts.len());
    for (expr, power) in parts {
        match expr {
            MeasureExpr::FreeConv { terms } => {
                for term in terms {
                    flat.push((term.of, term.power * power));
                }
            }
            other => flat.push((other, power)),
        }
    }

    // Free cumulants are linear in the convolution power, so semicircle terms
    // merge into one semicircle, plain Marchenko-Pastur terms into one law of
    // summed rate, and point masses into a single shift.
    let mut sc_mean = 0.0f64;
    let mut sc_var = 0.0f64;
    let mut have_sc = false;
    let mut mp_rate = 0.0f64;
    let mut have_mp = false;
    let mut delta_shift = 0.0f64;
    let mut rest: Vec<ConvTerm> = Vec::new();

    for (expr, power) in flat {
        if let Some(x) = as_point_mass(&expr) {
            delta_shift += power * x;
            continue;
        }
        match expr {
            MeasureExpr::Semicircle { mean, sigma } => {
                have_sc = true;
                sc_mean += power * mean;
                sc_var += power * sigma * sigma;
            }
            MeasureExpr::MarchenkoPastur { c } => {
                have_mp = true;
                mp_rate += c * power;
            }
            other => {
                if power == 1.0 {
                    match other {
                        MeasureExpr::FreeConv { terms } => rest.extend(terms),
                        single => rest.push(ConvTerm { of: single, power: 1.0 }),
                    }
                } else {
                    rest.push(ConvTerm { of: other, power });
                }
            }
        }
    }

    let mut terms: Vec<ConvTerm> = Vec::new();
    if have_sc {
        terms.push(ConvTerm {
            of: MeasureExpr::Semicircle { mean: sc_mean, sigma: sc_var.sqrt() },
            power: 1.0,
        });
    }
    if have_mp {
        terms.push(ConvTerm { of: MeasureExpr::MarchenkoPastur { c: mp_rate }, power: 1.0 });
    }
    terms.extend(rest);

    let body = match terms.len() {
        0 => return MeasureExpr::Atomic { atoms: vec![(delta_shift, 1.0)] },
        1 if terms[0].power == 1.0 => terms.into_iter().next().unwrap().of,
        _ => MeasureExpr::FreeConv { terms },
    };
    shift_simplified(delta_shift, body)
}
