//! Densities of free convolutions by Stieltjes inversion.
//!
//! The Cauchy transform of each convolution is evaluated just above the real
//! axis through subordination fixed points, on a ladder of imaginary offsets,
//! and extrapolated to the axis. The density is `-Im G / pi`.

use super::flatten::{flatten, Term};
use super::ConvError;
use crate::spectra::{density::closed_form_profile, DensityProfile, MeasureExpr};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_ITER: usize = 10_000;
const FIX_TOL: f64 = 1e-13;
const EPS_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Cauchy transform of a leaf at any non-real point. Values in the lower
/// half-plane follow from the reflection `G(conj z) = conj G(z)`.
fn g_leaf(leaf: &super::flatten::Leaf, z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return g_leaf(leaf, z.conj()).conj();
    }
    match leaf {
        super::flatten::Leaf::Semicircle { mean, sigma } => {
            let zc = z - mean;
            if *sigma == 0.0 {
                return 1.0 / zc;
            }
            let s2 = sigma * sigma;
            let root = (zc - 2.0 * sigma).sqrt() * (zc + 2.0 * sigma).sqrt();
            (zc - root) / (2.0 * s2)
        }
        super::flatten::Leaf::MarchenkoPastur { c } => {
            let r = c.sqrt();
            let a = (1.0 - r) * (1.0 - r);
            let b = (1.0 + r) * (1.0 + r);
            let root = (z - a).sqrt() * (z - b).sqrt();
            (z + (1.0 - c) - root) / (2.0 * z)
        }
        super::flatten::Leaf::Atomic { atoms } => {
            let mut g = Complex64::new(0.0, 0.0);
            for &(x, w) in atoms {
                g += w / (z - x);
            }
            g
        }
    }
}

/// Reciprocal Cauchy transform `F = 1/G` of the affine image of the term's
/// leaf (convolution power not applied).
fn f_affine(term: &Term, z: Complex64) -> Complex64 {
    let g = g_leaf(&term.leaf, (z - term.shift) / term.scale) / term.scale;
    1.0 / g
}

/// `F` of the term's full law `(scale * leaf + shift)^{boxplus power}`.
///
/// For `power > 1` this is the fixed point of
/// `f = F_affine(z/power + (1 - 1/power) f)`, which the reciprocal transform
/// contracts on the upper half-plane.
fn f_term(term: &Term, z: Complex64, warm: &mut Complex64) -> (Complex64, bool) {
    if term.power == 1.0 {
        return (f_affine(term, z), true);
    }
    let mut f = if warm.im > 0.0 { *warm } else { z };
    let mut ok = false;
    for _ in 0..MAX_ITER {
        let arg = z / term.power + (1.0 - 1.0 / term.power) * f;
        let next = f_affine(term, arg);
        let done = (next - f).norm() <= FIX_TOL * (1.0 + next.norm());
        f = next;
        if done {
            ok = true;
            break;
        }
    }
    *warm = f;
    (f, ok)
}

/// Warm starts carried along a grid sweep: one subordination point per fold
/// level and one fixed point per term.
struct Warm {
    omega: Vec<Complex64>,
    term_f: Vec<Complex64>,
}

impl Warm {
    fn new(n_terms: usize) -> Warm {
        Warm {
            omega: vec![Complex64::new(0.0, -1.0); n_terms],
            term_f: vec![Complex64::new(0.0, -1.0); n_terms],
        }
    }
}

/// `F` of the convolution of `terms[0..=level]`, by pairwise subordination.
///
/// With `A` the convolution of the first `level` terms and `B` the last one,
/// the subordination point `w` of `A` satisfies
/// `w = z + h_B(z + h_A(w))` where `h(u) = F(u) - u`, and then
/// `F_{A boxplus B}(z) = F_A(w)`.
fn f_fold(terms: &[Term], level: usize, z: Complex64, warm: &mut Warm) -> (Complex64, bool) {
    if level == 0 {
        let mut tf = warm.term_f[0];
        let out = f_term(&terms[0], z, &mut tf);
        warm.term_f[0] = tf;
        return out;
    }
    let mut w = if warm.omega[level].im > 0.0 { warm.omega[level] } else { z };
    let mut fa = Complex64::new(0.0, 0.0);
    let mut ok = false;
    let mut inner_ok = true;
    for _ in 0..MAX_ITER {
        let (fa_now, ok_a) = f_fold(terms, level - 1, w, warm);
        fa = fa_now;
        let u = z + fa - w;
        let mut tf = warm.term_f[level];
        let (fb, ok_b) = f_term(&terms[level], u, &mut tf);
        warm.term_f[level] = tf;
        inner_ok = ok_a && ok_b;
        let next = z + fb - u;
        let done = (next - w).norm() <= FIX_TOL * (1.0 + next.norm());
        w = next;
        if done {
            ok = true;
            break;
        }
    }
    warm.omega[level] = w;
    (fa, ok && inner_ok)
}

/// Point masses of a single flattened term's law, from the atom persistence
/// rule applied to the affine image of the leaf.
fn term_atoms(term: &Term) -> Vec<(f64, f64)> {
    let t = term.power;
    let mut atoms: Vec<(f64, f64)> = term
        .leaf
        .atoms()
        .into_iter()
        .filter_map(|(x, w)| {
            let mass = t * w - (t - 1.0);
            (mass > 0.0).then_some((t * (term.scale * x + term.shift), mass))
        })
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    atoms
}

/// Quadratic extrapolation of `(eps, value)` samples to `eps = 0`.
fn neville_to_zero(eps: &[f64], vals: &[f64]) -> f64 {
    let mut p = vals.to_vec();
    let n = p.len();
    for round in 1..n {
        for i in 0..n - round {
            let (e0, e1) = (eps[i], eps[i + round]);
            p[i] = (e0 * p[i + 1] - e1 * p[i]) / (e0 - e1);
        }
    }
    p[0]
}

/// Density of `mu^{boxplus t}` sampled on `grid`, plus its point masses.
///
/// Closed-form reductions short-circuit the numerics. Otherwise the
/// subordination evaluation runs on the ladder of offsets `1e-2, 1e-3, 1e-4`
/// and extrapolates to the axis; grid points where a fixed point failed to
/// converge within 10^4 iterations are filled by linear interpolation from
/// their converged neighbors rather than reported as zero. Atoms are
/// reported for single-term convolutions; multi-term trees return an empty
/// atom list. The atom poles are subtracted from the transform before
/// inversion, so the sampled points carry only the continuous part even on
/// top of a point mass.
pub fn density(mu: &MeasureExpr, t: f64, grid: &[f64]) -> Result<DensityProfile, ConvError> {
    let powered = super::free_power(mu, t)?;
    let simplified = powered.simplified();
    if let Some(profile) = closed_form_profile(&simplified, grid) {
        return Ok(profile);
    }
    let terms = flatten(&simplified);
    let atoms = if terms.len() == 1 { term_atoms(&terms[0]) } else { Vec::new() };
    if grid.is_empty() {
        return Ok(DensityProfile { points: Vec::new(), atoms });
    }

    let top = terms.len() - 1;
    let mut ladder = vec![[0.0f64; EPS_LADDER.len()]; grid.len()];
    let mut good = vec![true; grid.len()];
    for (ei, &eps) in EPS_LADDER.iter().enumerate() {
        let mut warm = Warm::new(terms.len());
        for (i, &x) in grid.iter().enumerate() {
            let z = Complex64::new(x, eps);
            let (f, ok) = f_fold(&terms, top, z, &mut warm);
            let mut g = 1.0 / f;
            for &(loc, mass) in &atoms {
                g -= mass / (z - loc);
            }
            ladder[i][ei] = -g.im / PI;
            if !ok {
                good[i] = false;
            }
        }
    }

    let mut points: Vec<(f64, Option<f64>)> = grid
        .iter()
        .zip(ladder.iter().zip(&good))
        .map(|(&x, (vals, &ok))| {
            let v = ok.then(|| neville_to_zero(&EPS_LADDER, vals).max(0.0));
            (x, v)
        })
        .collect();
    if points.iter().all(|(_, v)| v.is_none()) {
        return Err(ConvError::NonConvergence);
    }
    fill_gaps(&mut points);
    Ok(DensityProfile {
        points: points.into_iter().map(|(x, v)| (x, v.expect("gaps filled"))).collect(),
        atoms,
    })
}

fn fill_gaps(points: &mut [(f64, Option<f64>)]) {
    let n = points.len();
    let mut i = 0;
    while i < n {
        if points[i].1.is_some() {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i;
        while end < n && points[end].1.is_none() {
            end += 1;
        }
        let left = start.checked_sub(1).map(|j| points[j]);
        let right = (end < n).then(|| points[end]);
        for j in start..end {
            let x = points[j].0;
            let v = match (left, right) {
                (Some((xl, Some(vl))), Some((xr, Some(vr)))) => {
                    vl + (vr - vl) * (x - xl) / (xr - xl)
                }
                (Some((_, Some(vl))), None) => vl,
                (None, Some((_, Some(vr)))) => vr,
                _ => unreachable!("at least one converged point exists"),
            };
            points[j].1 = Some(v);
        }
        i = end;
    }
}
