//! Empirical-versus-predicted spectrum comparison.
//!
//! The W1 (order-1 Wasserstein) distance between the empirical spectral
//! distribution and a predicted law is computed by quantile coupling: both
//! distributions are read at the levels `(i + 1/2)/N` and the mean absolute
//! difference is taken. Edge gaps report how far the extreme eigenvalues
//! sit inside the predicted support.

use super::RmtError;
use crate::freeconv::{density, support_edges};
use crate::spectra::{quantile, MeasureExpr, QuantileError};

/// Spectrum agreement summary. Positive gaps mean the extreme eigenvalues
/// fall inside the predicted support interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralComparison {
    pub w1: f64,
    pub min_gap: f64,
    pub max_gap: f64,
}

/// Histogram with `bins` equal-width bins over `[lo, hi]`; entries as
/// `(bin_left, bin_right, count)`. Values outside the range are dropped,
/// and the right edge belongs to the last bin.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<(f64, f64, u64)>, RmtError> {
    if bins == 0 || !(hi > lo) {
        return Err(RmtError::BadHistogram);
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in values {
        if x < lo || x > hi {
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &count)| (lo + k as f64 * width, lo + (k + 1) as f64 * width, count))
        .collect())
}

/// Quantiles of `mu` at the coupling levels, through the closed form when
/// available and otherwise by inverting a numerically integrated density.
fn predicted_quantiles(mu: &MeasureExpr, count: usize) -> Result<Vec<f64>, RmtError> {
    let levels: Vec<f64> = (0..count).map(|i| (i as f64 + 0.5) / count as f64).collect();
    match quantile(mu, levels[0]) {
        Ok(first) => {
            let mut out = Vec::with_capacity(count);
            out.push(first);
            for &p in &levels[1..] {
                out.push(quantile(mu, p).map_err(RmtError::Quantile)?);
            }
            Ok(out)
        }
        Err(QuantileError::NotClosedForm) => numeric_quantiles(mu, &levels),
        Err(err) => Err(RmtError::Quantile(err)),
    }
}

fn numeric_quantiles(mu: &MeasureExpr, levels: &[f64]) -> Result<Vec<f64>, RmtError> {
    const GRID: usize = 4096;
    let edges = support_edges(mu, 1.0)?;
    let pad = 0.02 * edges.width().max(1e-6);
    let (lo, hi) = (edges.lo - pad, edges.hi + pad);
    let step = (hi - lo) / (GRID - 1) as f64;
    let grid: Vec<f64> = (0..GRID).map(|i| lo + i as f64 * step).collect();
    let profile = density(mu, 1.0, &grid)?;

    // Cumulative distribution by trapezoid rule, with atoms entering as
    // jumps at their locations.
    let mut cdf = vec![0.0f64; GRID];
    let mut acc: f64 = profile
        .atoms
        .iter()
        .filter(|(ax, _)| *ax <= grid[0])
        .map(|(_, aw)| aw)
        .sum();
    cdf[0] = acc;
    for i in 1..GRID {
        let (x0, f0) = profile.points[i - 1];
        let (x1, f1) = profile.points[i];
        acc += 0.5 * (f0 + f1) * (x1 - x0);
        for &(ax, aw) in &profile.atoms {
            if ax > x0 && ax <= x1 {
                acc += aw;
            }
        }
        cdf[i] = acc;
    }
    let mass = cdf[GRID - 1];
    if !(mass > 0.0) {
        return Err(RmtError::DegenerateDensity);
    }

    let mut out = Vec::with_capacity(levels.len());
    for &p in levels {
        let target = p * mass;
        let idx = cdf.partition_point(|&v| v < target);
        let q = if idx == 0 {
            grid[0]
        } else if idx >= GRID {
            grid[GRID - 1]
        } else {
            let (c0, c1) = (cdf[idx - 1], cdf[idx]);
            if c1 > c0 {
                grid[idx - 1] + (target - c0) / (c1 - c0) * step
            } else {
                grid[idx]
            }
        };
        out.push(q);
    }
    Ok(out)
}

/// Compares sorted eigenvalues against the predicted law.
pub fn compare_eigs(mu: &MeasureExpr, eigs: &[f64]) -> Result<SpectralComparison, RmtError> {
    if eigs.is_empty() {
        return Err(RmtError::EmptyDimension);
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let predicted = predicted_quantiles(mu, sorted.len())?;
    let w1 = sorted
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / sorted.len() as f64;
    let edges = support_edges(mu, 1.0)?;
    Ok(SpectralComparison {
        w1,
        min_gap: sorted[0] - edges.lo,
        max_gap: edges.hi - sorted[sorted.len() - 1],
    })
}

/// Compares the spectrum of a bipartite matrix against the predicted law.
pub fn compare(mu: &MeasureExpr, x: &super::BipartiteMatrix) -> Result<SpectralComparison, RmtError> {
    let eigs = x.eigvals()?;
    compare_eigs(mu, &eigs)
}
