//! Distribution functions and quantiles of closed-form trees.

use super::measure::MeasureExpr;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantileError {
    #[error("quantile level must lie in (0, 1), got {0}")]
    BadLevel(f64),
    #[error("no closed-form quantile for a free convolution tree")]
    NotClosedForm,
}

/// Cumulative distribution function `F(x)` for a closed-form tree.
pub fn cdf(mu: &MeasureExpr, x: f64) -> Result<f64, QuantileError> {
    cdf_inner(&mu.simplified(), x)
}

fn cdf_inner(mu: &MeasureExpr, x: f64) -> Result<f64, QuantileError> {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => {
            if *sigma == 0.0 {
                return Ok(if x >= *mean { 1.0 } else { 0.0 });
            }
            let u = ((x - mean) / sigma).clamp(-2.0, 2.0);
            Ok(0.5 + (u * (4.0 - u * u).sqrt() / 2.0 + 2.0 * (u / 2.0).asin()) / (2.0 * PI))
        }
        MeasureExpr::MarchenkoPastur { c } => Ok(mp_cdf(*c, x)),
        MeasureExpr::Atomic { atoms } => {
            Ok(atoms.iter().filter(|&&(loc, _)| loc <= x).map(|&(_, w)| w).sum())
        }
        MeasureExpr::Dilate { t, of } => {
            if *t > 0.0 {
                cdf_inner(of, x / t)
            } else {
                // P(tX <= x) = P(X >= x/t) = 1 - F(x/t) + P(X = x/t); the
                // simplifier has already folded atomic children, so the
                // remaining children here are atomless at any fixed point.
                Ok(1.0 - cdf_inner(of, x / t)?)
            }
        }
        MeasureExpr::Shift { s, of } => cdf_inner(of, x - s),
        MeasureExpr::FreeConv { .. } => Err(QuantileError::NotClosedForm),
    }
}

/// Marchenko-Pastur distribution function.
///
/// The continuous part is integrated after the substitution
/// `x = a + (b - a) sin^2(theta)`, which turns the square-root edge factors
/// into `(b - a) sin(theta) cos(theta)` and leaves an analytic integrand for
/// Gauss-Legendre quadrature.
fn mp_cdf(c: f64, x: f64) -> f64 {
    let r = c.sqrt();
    let a = (1.0 - r) * (1.0 - r);
    let b = (1.0 + r) * (1.0 + r);
    let atom = (1.0 - c).max(0.0);
    if x < 0.0 {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    if x <= a {
        return atom;
    }
    let base = atom;
    let theta_hi = (((x - a) / (b - a)).sqrt()).asin();
    let width = b - a;
    let integrand = |theta: f64| {
        let s2 = (2.0 * theta).sin();
        width * width * s2 * s2 / (4.0 * PI * (a + width * (theta.sin() * theta.sin())))
    };
    base + gauss_legendre(integrand, 0.0, theta_hi)
}

/// 32-point Gauss-Legendre quadrature on `[lo, hi]`.
fn gauss_legendre(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    // Abscissas and weights for n = 32 on [-1, 1], positive half.
    const X: [f64; 16] = [
        0.048307665687738316,
        0.144471961582796493,
        0.239287362252137075,
        0.331868602282127650,
        0.421351276130635345,
        0.506899908932229390,
        0.587715757240762329,
        0.663044266930215201,
        0.732182118740289680,
        0.794483795967942407,
        0.849367613732569970,
        0.896321155766052124,
        0.934906075937739689,
        0.964762255587506430,
        0.985611511545268335,
        0.997263861849481564,
    ];
    const W: [f64; 16] = [
        0.096540088514727801,
        0.095638720079274859,
        0.093844399080804566,
        0.091173878695763885,
        0.087652093004403811,
        0.083311924226946755,
        0.078193895787070306,
        0.072345794108848506,
        0.065822222776361847,
        0.058684093478535547,
        0.050998059262376176,
        0.042835898022226681,
        0.034273862913021433,
        0.025392065309262059,
        0.016274394730905671,
        0.007018610009470097,
    ];
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for i in 0..16 {
        acc += W[i] * (f(mid + half * X[i]) + f(mid - half * X[i]));
    }
    acc * half
}

/// Quantile `F^{-1}(q)` for `q` in `(0, 1)`, defined as the left-continuous
/// generalized inverse. Closed-form trees only.
pub fn quantile(mu: &MeasureExpr, q: f64) -> Result<f64, QuantileError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(QuantileError::BadLevel(q));
    }
    let simplified = mu.simplified();
    quantile_inner(&simplified, q)
}

fn quantile_inner(mu: &MeasureExpr, q: f64) -> Result<f64, QuantileError> {
    match mu {
        MeasureExpr::Atomic { atoms } => {
            let mut acc = 0.0;
            for &(x, w) in atoms {
                acc += w;
                if acc >= q - 1e-15 {
                    return Ok(x);
                }
            }
            Ok(atoms.last().expect("validated atomic is nonempty").0)
        }
        MeasureExpr::Semicircle { mean, sigma } => {
            if *sigma == 0.0 {
                return Ok(*mean);
            }
            Ok(invert_cdf(|x| cdf_inner(mu, x).unwrap(), q, mean - 2.0 * sigma, mean + 2.0 * sigma))
        }
        MeasureExpr::MarchenkoPastur { c } => {
            let r = c.sqrt();
            let a = (1.0 - r) * (1.0 - r);
            let b = (1.0 + r) * (1.0 + r);
            if *c < 1.0 && q <= 1.0 - c {
                return Ok(0.0);
            }
            Ok(invert_cdf(|x| mp_cdf(*c, x), q, a, b))
        }
        MeasureExpr::Dilate { t, of } => {
            if *t > 0.0 {
                Ok(t * quantile_inner(of, q)?)
            } else {
                Ok(t * quantile_inner(of, 1.0 - q)?)
            }
        }
        MeasureExpr::Shift { s, of } => Ok(s + quantile_inner(of, q)?),
        MeasureExpr::FreeConv { .. } => Err(QuantileError::NotClosedForm),
    }
}

fn invert_cdf(f: impl Fn(f64) -> f64, q: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}
