//! Closed-form densities and atoms.

use super::measure::MeasureExpr;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A density sampled on a grid, plus any point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    /// `(x, density)` pairs in grid order.
    pub points: Vec<(f64, f64)>,
    /// `(location, mass)` pairs of the atoms, sorted by location.
    pub atoms: Vec<(f64, f64)>,
}

impl DensityProfile {
    /// Mass of the profile by trapezoidal integration of the continuous part
    /// plus the atoms. Close to 1 when the grid covers the support.
    pub fn total_mass(&self) -> f64 {
        let mut mass: f64 = self.atoms.iter().map(|a| a.1).sum();
        for pair in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            mass += 0.5 * (y0 + y1) * (x1 - x0);
        }
        mass
    }
}

/// Density of the absolutely continuous part at `x`, for trees without free
/// convolution nodes. `None` when a [`MeasureExpr::FreeConv`] is present.
pub fn pdf_at(mu: &MeasureExpr, x: f64) -> Option<f64> {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => {
            if *sigma == 0.0 {
                return Some(0.0);
            }
            let u = x - mean;
            let rad = 4.0 * sigma * sigma - u * u;
            Some(if rad > 0.0 { rad.sqrt() / (2.0 * PI * sigma * sigma) } else { 0.0 })
        }
        MeasureExpr::MarchenkoPastur { c } => {
            let r = c.sqrt();
            let a = (1.0 - r) * (1.0 - r);
            let b = (1.0 + r) * (1.0 + r);
            if x <= a || x >= b {
                return Some(0.0);
            }
            Some(((b - x) * (x - a)).sqrt() / (2.0 * PI * x))
        }
        MeasureExpr::Atomic { .. } => Some(0.0),
        MeasureExpr::Dilate { t, of } => pdf_at(of, x / t).map(|d| d / t.abs()),
        MeasureExpr::Shift { s, of } => pdf_at(of, x - s),
        MeasureExpr::FreeConv { .. } => None,
    }
}

/// Point masses of a closed-form tree, sorted by location. `None` when a
/// free convolution node is present.
pub fn atoms_of(mu: &MeasureExpr) -> Option<Vec<(f64, f64)>> {
    let mut atoms = match mu {
        MeasureExpr::Semicircle { mean, sigma } => {
            if *sigma == 0.0 {
                vec![(*mean, 1.0)]
            } else {
                Vec::new()
            }
        }
        MeasureExpr::MarchenkoPastur { c } => {
            if *c < 1.0 {
                vec![(0.0, 1.0 - c)]
            } else {
                Vec::new()
            }
        }
        MeasureExpr::Atomic { atoms } => atoms.clone(),
        MeasureExpr::Dilate { t, of } => {
            atoms_of(of)?.into_iter().map(|(x, w)| (t * x, w)).collect()
        }
        MeasureExpr::Shift { s, of } => {
            atoms_of(of)?.into_iter().map(|(x, w)| (x + s, w)).collect()
        }
        MeasureExpr::FreeConv { .. } => return None,
    };
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(atoms)
}

/// Samples the density of a closed-form tree on `grid`. Free convolution
/// trees are served by `freeconv::density`, which falls back to this when
/// its argument simplifies to a closed form.
pub(crate) fn closed_form_profile(mu: &MeasureExpr, grid: &[f64]) -> Option<DensityProfile> {
    let atoms = atoms_of(mu)?;
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        points.push((x, pdf_at(mu, x)?));
    }
    Some(DensityProfile { points, atoms })
}

/// Density profile of a closed-form tree on the given grid.
pub fn density_grid(mu: &MeasureExpr, grid: &[f64]) -> Option<DensityProfile> {
    closed_form_profile(&mu.simplified(), grid)
}
