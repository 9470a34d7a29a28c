//! Inverse Cauchy transforms on the two real branches.
//!
//! For a compactly supported measure with Cauchy transform `G`, the branch
//! restrictions `G: (hi, inf) -> (0, w+)` and `G: (-inf, lo) -> (w-, 0)` are
//! strictly decreasing bijections. Their inverses `K = G^{-1}` extend the
//! R-transform to the real branches, and the support edges of free
//! convolutions are extrema of the summed `K` there.

use super::flatten::{Leaf, Term};

/// Which real branch of `K` is being evaluated: `Pos` is `w > 0` and leads
/// to the right support edge, `Neg` is `w < 0` and leads to the left edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Pos,
    Neg,
}

impl Side {
    pub(crate) fn flip(self) -> Side {
        match self {
            Side::Pos => Side::Neg,
            Side::Neg => Side::Pos,
        }
    }

    pub(crate) fn sign(self) -> f64 {
        match self {
            Side::Pos => 1.0,
            Side::Neg => -1.0,
        }
    }
}

/// The branch domain of a leaf `K`, as a bound on `|w|` (possibly infinite),
/// together with the limit of `K(w)` as `|w|` grows when the bound is
/// infinite. The limit is the nearest support point on that side.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BranchDomain {
    pub bound: f64,
    pub limit: Option<f64>,
}

/// Domain of the leaf's `K` on the given branch.
///
/// For the semicircle of width `sigma > 0` the transform `G` tends to
/// `1/sigma` at the edge, so the branch is `|w| < 1/sigma`. For
/// Marchenko-Pastur the right branch ends at `1/(1 + sqrt(c))`; the left one
/// ends at `1/(sqrt(c) - 1)` when `c > 1` and is unbounded with `K -> 0`
/// otherwise (the transform has a pole or a one-sided divergence at the
/// origin). Point masses and atomic leaves always give unbounded branches
/// with `K` tending to the outermost atom.
pub(crate) fn leaf_domain(leaf: &Leaf, side: Side) -> BranchDomain {
    match leaf {
        Leaf::Semicircle { mean, sigma } => {
            if *sigma == 0.0 {
                BranchDomain { bound: f64::INFINITY, limit: Some(*mean) }
            } else {
                BranchDomain { bound: 1.0 / sigma, limit: None }
            }
        }
        Leaf::MarchenkoPastur { c } => match side {
            Side::Pos => BranchDomain { bound: 1.0 / (1.0 + c.sqrt()), limit: None },
            Side::Neg => {
                if *c > 1.0 {
                    BranchDomain { bound: 1.0 / (c.sqrt() - 1.0), limit: None }
                } else {
                    BranchDomain { bound: f64::INFINITY, limit: Some(0.0) }
                }
            }
        },
        Leaf::Atomic { atoms } => {
            let limit = match side {
                Side::Pos => atoms[atoms.len() - 1].0,
                Side::Neg => atoms[0].0,
            };
            BranchDomain { bound: f64::INFINITY, limit: Some(limit) }
        }
    }
}

/// `K(v)` of the leaf at a point `v` of the branch given by `sign(v)`.
/// `|v|` must not exceed the branch bound.
pub(crate) fn leaf_k(leaf: &Leaf, v: f64) -> f64 {
    debug_assert!(v != 0.0);
    match leaf {
        Leaf::Semicircle { mean, sigma } => mean + sigma * sigma * v + 1.0 / v,
        Leaf::MarchenkoPastur { c } => c / (1.0 - v) + 1.0 / v,
        Leaf::Atomic { atoms } => atomic_k(atoms, v),
    }
}

/// Inverts `G(z) = sum w_i / (z - x_i)` on the branch outside the atoms.
///
/// The root is bracketed in the gap variable `g = |z - outermost atom|` and
/// then polished with safeguarded Newton steps; `G` is monotone there so the
/// bracket only shrinks.
fn atomic_k(atoms: &[(f64, f64)], v: f64) -> f64 {
    let (anchor, orient) = if v > 0.0 {
        (atoms[atoms.len() - 1].0, 1.0)
    } else {
        (atoms[0].0, -1.0)
    };
    let g_of = |gap: f64| -> (f64, f64) {
        // G and G' at z = anchor + orient * gap.
        let z = anchor + orient * gap;
        let mut g = 0.0;
        let mut dg = 0.0;
        for &(x, w) in atoms {
            let d = z - x;
            g += w / d;
            dg -= w / (d * d);
        }
        (g, dg)
    };

    let target = v.abs();
    // On either branch |G(anchor + orient*gap)| lies between w_anchor/gap and
    // 1/gap, so the root sits inside [w_anchor/target, 1/target].
    let w_anchor = if v > 0.0 { atoms[atoms.len() - 1].1 } else { atoms[0].1 };
    let mut lo = 0.5 * w_anchor / target;
    let mut hi = 2.0 / target;
    for _ in 0..200 {
        if g_of(lo).0.abs() >= target {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..200 {
        if g_of(hi).0.abs() <= target {
            break;
        }
        hi *= 2.0;
    }

    let mut gap = (lo * hi).sqrt();
    for _ in 0..200 {
        let (g, dg) = g_of(gap);
        let diff = g.abs() - target;
        if diff > 0.0 {
            lo = gap;
        } else {
            hi = gap;
        }
        // |G| decreases in the gap on both branches.
        let slope = -dg.abs();
        let step = diff / slope;
        let mut next = gap - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - gap).abs() <= 1e-16 * gap {
            gap = next;
            break;
        }
        gap = next;
    }
    anchor + orient * gap
}

/// Combined branch data of a flat list of terms: the common `|w|` bound and,
/// when every leaf branch is unbounded, the analytic limit of the summed `K`.
pub(crate) struct CombinedDomain {
    pub bound: f64,
    pub limit: Option<f64>,
}

pub(crate) fn combined_domain(terms: &[Term], side: Side) -> CombinedDomain {
    let mut bound = f64::INFINITY;
    let mut limit_sum = 0.0;
    let mut all_limits = true;
    for term in terms {
        let leaf_side = if term.scale > 0.0 { side } else { side.flip() };
        let dom = leaf_domain(&term.leaf, leaf_side);
        bound = bound.min(dom.bound / term.scale.abs());
        match dom.limit {
            Some(l) => limit_sum += term.power * (term.scale * l + term.shift),
            None => all_limits = false,
        }
    }
    CombinedDomain {
        bound,
        limit: (bound.is_infinite() && all_limits).then_some(limit_sum),
    }
}

/// `K` of the free convolution of the terms, evaluated at branch point `w`.
///
/// Writing `K_i` for the inverse transform of term `i`'s affine leaf law,
/// the R-transforms add: the total is
/// `sum_i power_i * (scale_i * K_i(scale_i * w) + shift_i - 1/w) + 1/w`.
pub(crate) fn k_total(terms: &[Term], w: f64) -> f64 {
    let mut acc = 1.0 / w;
    for term in terms {
        let v = term.scale * w;
        let k_aff = term.scale * leaf_k(&term.leaf, v) + term.shift;
        acc += term.power * (k_aff - 1.0 / w);
    }
    acc
}

/// `K` at the finite boundary of the combined domain. Every leaf transform
/// stays finite there, so plain evaluation applies.
pub(crate) fn k_at_bound(terms: &[Term], side: Side, bound: f64) -> f64 {
    k_total(terms, side.sign() * bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(mean: f64, sigma: f64) -> Leaf {
        Leaf::Semicircle { mean, sigma }
    }

    #[test]
    fn semicircle_k_recovers_edges_at_the_domain_bound() {
        let leaf = sc(1.0, 0.5);
        let dom = leaf_domain(&leaf, Side::Pos);
        assert_eq!(dom.bound, 2.0);
        assert!((leaf_k(&leaf, 2.0) - 2.0).abs() < 1e-14);
        assert!((leaf_k(&leaf, -2.0) - 0.0).abs() < 1e-14);
    }

    #[test]
    fn marchenko_pastur_k_recovers_edges() {
        let leaf = Leaf::MarchenkoPastur { c: 4.0 };
        let pos = leaf_domain(&leaf, Side::Pos);
        assert!((pos.bound - 1.0 / 3.0).abs() < 1e-15);
        assert!((leaf_k(&leaf, pos.bound) - 9.0).abs() < 1e-12);
        let neg = leaf_domain(&leaf, Side::Neg);
        assert!((neg.bound - 1.0).abs() < 1e-15);
        assert!((leaf_k(&leaf, -neg.bound) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_rate_marchenko_pastur_left_branch_tends_to_zero() {
        let leaf = Leaf::MarchenkoPastur { c: 0.5 };
        let neg = leaf_domain(&leaf, Side::Neg);
        assert!(neg.bound.is_infinite());
        assert_eq!(neg.limit, Some(0.0));
        assert!(leaf_k(&leaf, -1e9).abs() < 1e-8);
    }

    #[test]
    fn atomic_k_inverts_the_transform() {
        let atoms = vec![(-1.0, 0.3), (0.5, 0.2), (2.0, 0.5)];
        let leaf = Leaf::Atomic { atoms: atoms.clone() };
        for &v in &[0.01, 0.7, 3.0, 1e4, -0.02, -1.5, -2e3] {
            let z = leaf_k(&leaf, v);
            let g: f64 = atoms.iter().map(|&(x, w)| w / (z - x)).sum();
            assert!(
                (g - v).abs() <= 1e-9 * v.abs(),
                "v = {v}: K = {z}, G(K) = {g}"
            );
            if v > 0.0 {
                assert!(z > 2.0);
            } else {
                assert!(z < -1.0);
            }
        }
    }

    #[test]
    fn atomic_k_limit_is_the_outermost_atom() {
        let leaf = Leaf::Atomic { atoms: vec![(-1.0, 0.5), (3.0, 0.5)] };
        assert!((leaf_k(&leaf, 1e12) - 3.0).abs() < 1e-9);
        assert!((leaf_k(&leaf, -1e12) + 1.0).abs() < 1e-9);
        let dom = leaf_domain(&leaf, Side::Pos);
        assert_eq!(dom.limit, Some(3.0));
    }

    #[test]
    fn point_mass_k_is_a_pure_pole() {
        let leaf = sc(2.0, 0.0);
        assert!((leaf_k(&leaf, 4.0) - 2.25).abs() < 1e-15);
        let dom = leaf_domain(&leaf, Side::Neg);
        assert!(dom.bound.is_infinite());
        assert_eq!(dom.limit, Some(2.0));
    }

    #[test]
    fn negative_scale_flips_the_leaf_branch() {
        let term = Term {
            leaf: Leaf::MarchenkoPastur { c: 4.0 },
            scale: -1.0,
            shift: 0.0,
            power: 1.0,
        };
        // Right edge of the reflected law comes from the leaf's left branch.
        let dom = combined_domain(std::slice::from_ref(&term), Side::Pos);
        assert!((dom.bound - 1.0).abs() < 1e-15);
        assert!((k_at_bound(std::slice::from_ref(&term), Side::Pos, dom.bound) + 1.0).abs() < 1e-12);
    }
}
