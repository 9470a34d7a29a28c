//! Support edges of free convolutions by extremizing the summed inverse
//! transform over its real branches.

use super::branch::{combined_domain, k_at_bound, k_total, Side};
use super::flatten::{flatten, Term};
use super::ConvError;
use crate::spectra::{exact_support, mean_var, MeasureExpr, SupportInterval, SupportKind};

const GRID_POINTS: usize = 512;
const REFINE_TOL: f64 = 1e-12;

/// Right or left support edge of the convolution of `terms`.
///
/// The edge is the minimum of `K` over the positive branch (right edge) or
/// the maximum over the negative branch (left edge), with the branch
/// boundary itself as a candidate: scanning a logarithmic grid locates the
/// extremum and golden-section refinement pins it down.
pub(crate) fn branch_edge(terms: &[Term], side: Side) -> Result<(f64, SupportKind), ConvError> {
    let sign = side.sign();
    // Orient so that smaller is better on both sides.
    let objective = |w: f64| sign * k_total(terms, w);

    let dom = combined_domain(terms, side);
    let mut best_val = f64::INFINITY;
    let mut boundary_exact = false;
    if dom.bound.is_finite() {
        best_val = sign * k_at_bound(terms, side, dom.bound);
        boundary_exact = true;
    } else if let Some(limit) = dom.limit {
        best_val = sign * limit;
        boundary_exact = true;
    }

    let grid = branch_grid(terms, dom.bound);
    let mut vals = Vec::with_capacity(grid.len());
    let mut best_idx = None;
    for (idx, &w) in grid.iter().enumerate() {
        let v = objective(sign * w);
        vals.push(v);
        if v.is_finite() && best_idx.map_or(true, |b: usize| v < vals[b]) {
            best_idx = Some(idx);
        }
    }

    let mut interior_exact = false;
    if let Some(i) = best_idx {
        let lo = if i == 0 { grid[0] * 0.25 } else { grid[i - 1] };
        let hi = if i + 1 == grid.len() {
            if dom.bound.is_finite() {
                dom.bound
            } else {
                grid[i] * 4.0
            }
        } else {
            grid[i + 1]
        };
        let (val, converged) = golden_min(|w| objective(sign * w), lo, hi);
        if val < best_val {
            best_val = val;
            interior_exact = converged;
            boundary_exact = false;
        }
    }

    if !best_val.is_finite() {
        return Err(ConvError::EdgeSearch(format!(
            "no finite transform values found on the {side:?} branch"
        )));
    }
    let kind = if boundary_exact || interior_exact {
        SupportKind::Exact
    } else {
        SupportKind::MonteCarlo
    };
    Ok((sign * best_val, kind))
}

/// Logarithmic scan grid in `|w|`. For a finite branch bound the grid covers
/// both the small-`w` decades and the approach to the bound; otherwise it
/// spans a wide fixed range around the scale set by the affine hulls.
fn branch_grid(terms: &[Term], bound: f64) -> Vec<f64> {
    let mut grid = Vec::with_capacity(GRID_POINTS);
    if bound.is_finite() {
        let half = GRID_POINTS / 2;
        log_fill(&mut grid, bound * 1e-9, bound * 0.5, half);
        let start = grid.len();
        log_fill(&mut grid, bound * 1e-12, bound * 0.5, half);
        for w in &mut grid[start..] {
            *w = bound - *w;
        }
    } else {
        let scale = terms
            .iter()
            .map(|t| {
                let (lo, hi) = t.affine_hull();
                lo.abs().max(hi.abs())
            })
            .fold(1e-8, f64::max);
        log_fill(&mut grid, 1e-12 / scale, 1e12 / scale, GRID_POINTS);
    }
    grid.sort_by(f64::total_cmp);
    // The two half-grids meet at half the bound through different rounding
    // paths; near-duplicates must merge or the refinement bracket around a
    // best point at the seam collapses and can exclude the true extremum.
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
    grid
}

fn log_fill(grid: &mut Vec<f64>, lo: f64, hi: f64, count: usize) {
    let (llo, lhi) = (lo.ln(), hi.ln());
    for i in 0..count {
        let u = i as f64 / (count - 1) as f64;
        grid.push((llo + u * (lhi - llo)).exp());
    }
}

/// Golden-section minimization over `[lo, hi]`, parametrized in `ln w` so the
/// bracket shrinks uniformly across decades. Returns the minimum value and
/// whether the bracket converged below [`REFINE_TOL`].
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, bool) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    let mut converged = false;
    for _ in 0..160 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp());
        }
        if (b - a).abs() < REFINE_TOL {
            converged = true;
            break;
        }
    }
    (fc.min(fd), converged)
}

/// Support edges `[lo, hi]` of `mu^{boxplus t}` for `t >= 1`.
///
/// Closed-form reductions are used whenever the powered tree simplifies to
/// one; otherwise both edges come from the branch extremization. The result
/// has kind `exact` unless a refinement failed to converge.
pub fn support_edges(mu: &MeasureExpr, t: f64) -> Result<SupportInterval, ConvError> {
    let powered = super::free_power(mu, t)?;
    let simplified = powered.simplified();
    if let Some(interval) = exact_support(&simplified) {
        return Ok(interval);
    }
    let terms = flatten(&simplified);
    let (hi, hi_kind) = branch_edge(&terms, Side::Pos)?;
    let (lo, lo_kind) = branch_edge(&terms, Side::Neg)?;
    if lo > hi + 1e-9 * (1.0 + hi.abs()) {
        return Err(ConvError::EdgeSearch(format!(
            "edge search produced a crossed interval [{lo}, {hi}]"
        )));
    }
    let kind = if hi_kind == SupportKind::Exact && lo_kind == SupportKind::Exact {
        SupportKind::Exact
    } else {
        SupportKind::MonteCarlo
    };
    Ok(SupportInterval::new(lo.min(hi), hi, kind))
}

/// Outer bound on the support of `mu^{boxplus T}`: the hull of `mu` grows by
/// the mean times `T - 1` and spreads by at most `2 sigma sqrt(T - 1)` on
/// each side.
pub fn support_bound(mu: &MeasureExpr, t: f64) -> Result<SupportInterval, ConvError> {
    if !t.is_finite() || t < 1.0 {
        return Err(ConvError::PowerBelowOne(t));
    }
    let base = match exact_support(mu) {
        Some(interval) => interval,
        None => support_edges(mu, 1.0)?,
    };
    let (mean, var) = mean_var(mu);
    let spread = 2.0 * var.sqrt() * (t - 1.0).sqrt();
    let drift = mean * (t - 1.0);
    Ok(SupportInterval::new(
        base.lo + drift - spread,
        base.hi + drift + spread,
        SupportKind::OuterBound,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::MeasureExpr;

    fn edges(mu: &MeasureExpr, t: f64) -> (f64, f64) {
        let s = support_edges(mu, t).unwrap();
        (s.lo, s.hi)
    }

    #[test]
    fn powered_semicircle_reduces_to_closed_form() {
        let mu = MeasureExpr::Semicircle { mean: 0.0, sigma: 1.0 };
        let s = support_edges(&mu, 3.0).unwrap();
        let r = 2.0 * 3.0f64.sqrt();
        assert!((s.lo + r).abs() < 1e-12);
        assert!((s.hi - r).abs() < 1e-12);
        assert_eq!(s.kind, SupportKind::Exact);
    }

    #[test]
    fn bernoulli_squared_has_edges_at_plus_minus_two() {
        // (1/2)(delta_{-1} + delta_1) at power 2 is the arcsine law on
        // (-2, 2): K(w) = sqrt(1 + 4w^2)/w decreases towards its limit 2 as
        // w grows, so the edge is the limit value rather than an interior
        // critical point.
        let mu = MeasureExpr::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let (lo, hi) = edges(&mu, 2.0);
        let expect = 2.0;
        assert!((hi - expect).abs() < 1e-9, "hi = {hi}");
        assert!((lo + expect).abs() < 1e-9, "lo = {lo}");
    }

    #[test]
    fn atom_keeps_sticking_out_for_small_powers() {
        // 0.9 delta_0 + 0.1 delta_1 at power T: the atom at 0 survives with
        // mass 0.9T - (T - 1) > 0 for T < 10, so the left edge stays at
        // T * 0 = 0 while mass flows right.
        let mu = MeasureExpr::atomic(vec![(0.0, 0.9), (1.0, 0.1)]).unwrap();
        let (lo, hi) = edges(&mu, 2.0);
        assert!(lo.abs() < 1e-9, "lo = {lo}");
        assert!(hi > 0.2 && hi < 2.0, "hi = {hi}");
    }

    #[test]
    fn free_poisson_limit_matches_marchenko_pastur() {
        // n-fold power of ((1 - c/n) delta_0 + (c/n) delta_1) approaches
        // MP{c}; at n = 400 the edges agree to a few parts in a hundred.
        let n = 400.0;
        let c = 2.0;
        let mu = MeasureExpr::atomic(vec![(0.0, 1.0 - c / n), (1.0, c / n)]).unwrap();
        let (lo, hi) = edges(&mu, n);
        let r = c.sqrt();
        assert!((hi - (1.0 + r) * (1.0 + r)).abs() < 0.05, "hi = {hi}");
        assert!((lo - (1.0 - r) * (1.0 - r)).abs() < 0.05, "lo = {lo}");
    }

    #[test]
    fn semicircle_plus_point_masses_shifts_edges() {
        // SC{0,1} boxplus delta_3 translates the support to [1, 5].
        let mu = MeasureExpr::free_conv(vec![
            (MeasureExpr::Semicircle { mean: 0.0, sigma: 1.0 }, 1.0),
            (MeasureExpr::point_mass(3.0).unwrap(), 1.0),
        ])
        .unwrap();
        let (lo, hi) = edges(&mu, 1.0);
        assert!((lo - 1.0).abs() < 1e-10);
        assert!((hi - 5.0).abs() < 1e-10);
    }

    #[test]
    fn marchenko_pastur_mix_edges_match_the_merged_rate() {
        // MP{1}^{boxplus 1.5} boxplus MP{0.5} merges to MP{2}.
        let mu = MeasureExpr::free_conv(vec![
            (MeasureExpr::MarchenkoPastur { c: 1.0 }, 1.5),
            (MeasureExpr::MarchenkoPastur { c: 0.5 }, 1.0),
        ])
        .unwrap();
        let (lo, hi) = edges(&mu, 1.0);
        let r = 2.0f64.sqrt();
        assert!((lo - (1.0 - r) * (1.0 - r)).abs() < 1e-12);
        assert!((hi - (1.0 + r) * (1.0 + r)).abs() < 1e-12);
    }

    #[test]
    fn reflected_term_convolution_is_symmetric_when_balanced() {
        // MP{1} boxplus (-MP{1}) is symmetric, so the edges are mirrored.
        let mu = MeasureExpr::free_conv(vec![
            (MeasureExpr::MarchenkoPastur { c: 1.0 }, 1.0),
            (
                MeasureExpr::dilate(-1.0, MeasureExpr::MarchenkoPastur { c: 1.0 }).unwrap(),
                1.0,
            ),
        ])
        .unwrap();
        let (lo, hi) = edges(&mu, 1.0);
        assert!((lo + hi).abs() < 1e-9, "({lo}, {hi})");
        assert!(hi > 2.0 && hi < 5.0);
    }

    #[test]
    fn edge_search_matches_series_tail_growth() {
        // The right edge bounds the moment growth: m_{2p}^{1/(2p)} -> hi for
        // measures on [0, inf); check the ordering on a convolution tree.
        let mu = MeasureExpr::free_conv(vec![
            (MeasureExpr::MarchenkoPastur { c: 3.0 }, 1.0),
            (MeasureExpr::atomic(vec![(0.5, 0.5), (2.0, 0.5)]).unwrap(), 2.0),
        ])
        .unwrap();
        let (lo, hi) = edges(&mu, 1.0);
        let m = crate::spectra::moments(&mu, 24).unwrap();
        let root = m.get(24).powf(1.0 / 24.0);
        assert!(root <= hi + 1e-6);
        assert!(root >= 0.5 * hi);
        assert!(lo >= 0.0 - 1e-9);
    }

    #[test]
    fn support_bound_contains_the_true_edges() {
        let mu = MeasureExpr::atomic(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        for t in [1.0, 2.0, 5.5] {
            let outer = support_bound(&mu, t).unwrap();
            let tight = support_edges(&mu, t).unwrap();
            assert!(outer.encloses(&tight, 1e-9), "t = {t}: {outer:?} vs {tight:?}");
            assert_eq!(outer.kind, SupportKind::OuterBound);
        }
    }

    #[test]
    fn support_bound_is_tight_at_power_one() {
        let mu = MeasureExpr::MarchenkoPastur { c: 2.0 };
        let outer = support_bound(&mu, 1.0).unwrap();
        let exact = exact_support(&mu).unwrap();
        assert!((outer.lo - exact.lo).abs() < 1e-12);
        assert!((outer.hi - exact.hi).abs() < 1e-12);
    }

    #[test]
    fn power_below_one_is_rejected() {
        let mu = MeasureExpr::MarchenkoPastur { c: 1.0 };
        assert!(matches!(support_edges(&mu, 0.5), Err(ConvError::PowerBelowOne(_))));
        assert!(matches!(support_bound(&mu, 0.99), Err(ConvError::PowerBelowOne(_))));
    }
}
