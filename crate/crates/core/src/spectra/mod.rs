//! Compactly supported probability measures on the real line, described by
//! expression trees, and the series/support/density/quantile machinery that
//! evaluates them.

pub(crate) mod density;
mod measure;
mod quantile;
mod series;
mod support;

pub use density::{density_grid, DensityProfile};
pub use measure::{ConvTerm, MeasureError, MeasureExpr, MAX_ORDER};
pub use quantile::{cdf, quantile, QuantileError};
pub use series::{
    cumulants, cumulants_to_moments, mean_var, moments, moments_to_cumulants, CumulantSeries,
    MomentSeries, SeriesError,
};
pub use support::{exact_support, SupportInterval, SupportKind};
