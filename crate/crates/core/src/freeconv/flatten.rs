//! Flattening measure trees into affine convolution terms.
//!
//! Every tree rewrites exactly as a free convolution of terms
//! `(scale * leaf + shift)^{boxplus power}` with a parametric leaf. The edge
//! search and the density engine both work on this flat form.

use crate::spectra::{ConvTerm, MeasureExpr};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Leaf {
    Semicircle { mean: f64, sigma: f64 },
    MarchenkoPastur { c: f64 },
    Atomic { atoms: Vec<(f64, f64)> },
}

impl Leaf {
    /// Convex hull `[lo, hi]` of the leaf's support.
    pub(crate) fn hull(&self) -> (f64, f64) {
        match self {
            Leaf::Semicircle { mean, sigma } => (mean - 2.0 * sigma, mean + 2.0 * sigma),
            Leaf::MarchenkoPastur { c } => {
                let r = c.sqrt();
                let lo = if *c < 1.0 { 0.0 } else { (1.0 - r) * (1.0 - r) };
                (lo, (1.0 + r) * (1.0 + r))
            }
            Leaf::Atomic { atoms } => (atoms[0].0, atoms[atoms.len() - 1].0),
        }
    }

    /// Point masses of the leaf.
    pub(crate) fn atoms(&self) -> Vec<(f64, f64)> {
        match self {
            Leaf::Semicircle { mean, sigma } => {
                if *sigma == 0.0 {
                    vec![(*mean, 1.0)]
                } else {
                    Vec::new()
                }
            }
            Leaf::MarchenkoPastur { c } => {
                if *c < 1.0 {
                    vec![(0.0, 1.0 - c)]
                } else {
                    Vec::new()
                }
            }
            Leaf::Atomic { atoms } => atoms.clone(),
        }
    }
}

/// One flattened factor: the law of `scale * X + shift` under the leaf,
/// raised to the free convolution power `power >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Term {
    pub leaf: Leaf,
    pub scale: f64,
    pub shift: f64,
    pub power: f64,
}

impl Term {
    /// Hull of the affine image of the leaf (before the convolution power).
    pub(crate) fn affine_hull(&self) -> (f64, f64) {
        let (lo, hi) = self.leaf.hull();
        let (a, b) = (self.scale * lo + self.shift, self.scale * hi + self.shift);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// Rewrites `mu` as a flat list of terms whose free convolution equals `mu`.
///
/// Affine maps distribute over convolutions; the additive shift may be
/// attached to any single factor, here the first, with the shift divided by
/// that factor's power so the first cumulants come out right.
pub(crate) fn flatten(mu: &MeasureExpr) -> Vec<Term> {
    let mut out = Vec::new();
    walk(mu, 1.0, 0.0, 1.0, &mut out);
    out
}

fn walk(mu: &MeasureExpr, scale: f64, shift: f64, power: f64, out: &mut Vec<Term>) {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => out.push(Term {
            leaf: Leaf::Semicircle { mean: *mean, sigma: *sigma },
            scale,
            shift,
            power,
        }),
        MeasureExpr::MarchenkoPastur { c } => out.push(Term {
            leaf: Leaf::MarchenkoPastur { c: *c },
            scale,
            shift,
            power,
        }),
        MeasureExpr::Atomic { atoms } => out.push(Term {
            leaf: Leaf::Atomic { atoms: atoms.clone() },
            scale,
            shift,
            power,
        }),
        MeasureExpr::Dilate { t, of } => walk(of, scale * t, shift, power, out),
        MeasureExpr::Shift { s, of } => walk(of, scale, shift + scale * s, power, out),
        MeasureExpr::FreeConv { terms } => {
            for (idx, ConvTerm { of, power: p }) in terms.iter().enumerate() {
                let child_shift = if idx == 0 { shift / p } else { 0.0 };
                walk(of, scale, child_shift, power * p, out);
            }
        }
    }
}
