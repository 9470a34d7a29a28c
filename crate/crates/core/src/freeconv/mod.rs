//! Free additive convolution powers: supports, atoms and densities.

mod branch;
mod edges;
mod flatten;
mod stieltjes;

pub use edges::{support_bound, support_edges};
pub use stieltjes::density;

use crate::spectra::{ConvTerm, MeasureError, MeasureExpr};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("convolution power must be a finite number >= 1, got {0}")]
    PowerBelowOne(f64),
    #[error("atom persistence needs an atomic measure")]
    NotAtomic,
    #[error("edge search failed: {0}")]
    EdgeSearch(String),
    #[error("stieltjes inversion did not converge on any grid point")]
    NonConvergence,
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The free convolution power `mu^{boxplus t}`, `t >= 1`, as an expression
/// tree.
///
/// Semicircle, Marchenko-Pastur and point-mass leaves have closed-form
/// powers; the power distributes through dilations, shifts and existing
/// convolution nodes. Any other tree is wrapped in a single
/// [`MeasureExpr::FreeConv`] term.
pub fn free_power(mu: &MeasureExpr, t: f64) -> Result<MeasureExpr, ConvError> {
    if !t.is_finite() || t < 1.0 {
        return Err(ConvError::PowerBelowOne(t));
    }
    if t == 1.0 {
        return Ok(mu.clone());
    }
    Ok(power_tree(mu, t))
}

fn power_tree(mu: &MeasureExpr, t: f64) -> MeasureExpr {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => MeasureExpr::Semicircle {
            mean: t * mean,
            sigma: sigma * t.sqrt(),
        },
        MeasureExpr::MarchenkoPastur { c } => MeasureExpr::MarchenkoPastur { c: c * t },
        MeasureExpr::Atomic { atoms } if atoms.len() == 1 => MeasureExpr::Atomic {
            atoms: vec![(t * atoms[0].0, 1.0)],
        },
        MeasureExpr::Atomic { .. } => MeasureExpr::FreeConv {
            terms: vec![ConvTerm { of: mu.clone(), power: t }],
        },
        MeasureExpr::Dilate { t: u, of } => MeasureExpr::Dilate {
            t: *u,
            of: Box::new(power_tree(of, t)),
        },
        // (mu + s)^{boxplus t} = mu^{boxplus t} + t s: only the first
        // cumulant picks up the shift, scaled by the power.
        MeasureExpr::Shift { s, of } => MeasureExpr::Shift {
            s: t * s,
            of: Box::new(power_tree(of, t)),
        },
        MeasureExpr::FreeConv { terms } => MeasureExpr::FreeConv {
            terms: terms
                .iter()
                .map(|term| ConvTerm { of: term.of.clone(), power: term.power * t })
                .collect(),
        },
    }
}

/// Atoms of `mu^{boxplus t}` for an atomic `mu` and `t >= 1`: the atom at
/// `a` with mass `w` moves to `t a` and its mass shrinks to `t w - (t - 1)`,
/// surviving only while that is positive.
pub fn atom_persistence(mu: &MeasureExpr, t: f64) -> Result<Vec<(f64, f64)>, ConvError> {
    if !t.is_finite() || t < 1.0 {
        return Err(ConvError::PowerBelowOne(t));
    }
    let MeasureExpr::Atomic { atoms } = mu else {
        return Err(ConvError::NotAtomic);
    };
    Ok(atoms
        .iter()
        .filter_map(|&(a, w)| {
            let mass = t * w - (t - 1.0);
            (mass > 0.0).then_some((t * a, mass))
        })
        .collect())
}
