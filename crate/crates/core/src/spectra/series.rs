//! Moment and free-cumulant series of measure expressions.
//!
//! The two series determine each other through the generating-function
//! identity `M(z) = C(z M(z))`, where `M(z) = 1 + sum m_p z^p` and
//! `C(z) = 1 + sum k_p z^p`. Extracting coefficients gives
//! `m_p = sum_{s=1}^{p} k_s * [z^{p-s}] M(z)^s`, which is also the basis of
//! the inverse direction. Orders are capped at [`MAX_ORDER`] because the
//! alternating sums degrade in f64 beyond that.

use super::measure::{MeasureExpr, MAX_ORDER};
use crate::linalg::eigvalsh_real;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("order must be at least 1")]
    OrderZero,
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
}

/// Moments `m_1 .. m_P` of a probability measure; `m_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries {
    vals: Vec<f64>,
}

/// Free cumulants `k_1 .. k_P` of a probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSeries {
    vals: Vec<f64>,
}

macro_rules! series_common {
    ($name:ident) => {
        impl $name {
            pub fn from_vec(vals: Vec<f64>) -> Result<Self, SeriesError> {
                if vals.is_empty() {
                    return Err(SeriesError::OrderZero);
                }
                if vals.len() > MAX_ORDER {
                    return Err(SeriesError::OrderTooLarge(vals.len()));
                }
                Ok($name { vals })
            }

            pub fn order(&self) -> usize {
                self.vals.len()
            }

            /// Value at order `p`, 1-based.
            pub fn get(&self, p: usize) -> f64 {
                assert!(p >= 1 && p <= self.vals.len(), "order {p} out of range");
                self.vals[p - 1]
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.vals
            }
        }
    };
}

series_common!(MomentSeries);
series_common!(CumulantSeries);

impl MomentSeries {
    /// True when the Hankel matrix `(m_{i+j})` built from the series is
    /// positive semidefinite, a necessary condition for the numbers to be
    /// moments of a positive measure.
    pub fn hankel_psd(&self) -> bool {
        let k = self.vals.len() / 2 + 1;
        let m = |p: usize| if p == 0 { 1.0 } else { self.vals[p - 1] };
        let mut h = vec![0.0f64; k * k];
        let mut scale = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                h[i * k + j] = m(i + j);
                scale = scale.max(m(i + j).abs());
            }
        }
        match eigvalsh_real(&h, k) {
            Ok(w) => w.first().map_or(false, |&lo| lo >= -1e-10 * scale.max(1.0)),
            Err(_) => false,
        }
    }
}

fn check_order(order: usize) -> Result<(), SeriesError> {
    if order == 0 {
        return Err(SeriesError::OrderZero);
    }
    if order > MAX_ORDER {
        return Err(SeriesError::OrderTooLarge(order));
    }
    Ok(())
}

/// Coefficients `[z^q] M(z)^s` for `s = 1..=smax`, `q = 0..=qmax`, where
/// `m[q]` holds the moment of order `q` and `m[0] = 1`.
fn power_table(m: &[f64], smax: usize, qmax: usize) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(smax);
    if smax == 0 {
        return table;
    }
    table.push(m[..=qmax].to_vec());
    for s in 2..=smax {
        let prev = &table[s - 2];
        let mut next = vec![0.0f64; qmax + 1];
        for (q, slot) in next.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..=q {
                acc += prev[q - j] * m[j];
            }
            *slot = acc;
        }
        table.push(next);
    }
    table
}

pub fn cumulants_to_moments(kappa: &CumulantSeries) -> MomentSeries {
    let p_max = kappa.order();
    let k = kappa.as_slice();
    let mut m = vec![0.0f64; p_max + 1];
    m[0] = 1.0;
    for p in 1..=p_max {
        let mut cur: Vec<f64> = m[..p].to_vec();
        let mut acc = k[0] * cur[p - 1];
        for s in 2..=p {
            let deg = p - s;
            let mut next = vec![0.0f64; deg + 1];
            for (q, slot) in next.iter_mut().enumerate() {
                let mut sum = 0.0;
                for j in 0..=q {
                    sum += cur[q - j] * m[j];
                }
                *slot = sum;
            }
            acc += k[s - 1] * next[deg];
            cur = next;
        }
        m[p] = acc;
    }
    MomentSeries { vals: m[1..].to_vec() }
}

pub fn moments_to_cumulants(moments: &MomentSeries) -> CumulantSeries {
    let p_max = moments.order();
    let mut m = vec![0.0f64; p_max + 1];
    m[0] = 1.0;
    m[1..].copy_from_slice(moments.as_slice());
    let table = power_table(&m, p_max, p_max.saturating_sub(1));
    let mut kappa = vec![0.0f64; p_max];
    for p in 1..=p_max {
        let mut acc = m[p];
        for s in 1..p {
            acc -= kappa[s - 1] * table[s - 1][p - s];
        }
        kappa[p - 1] = acc;
    }
    CumulantSeries { vals: kappa }
}

fn raw_cumulants(mu: &MeasureExpr, order: usize) -> Vec<f64> {
    match mu {
        MeasureExpr::Semicircle { mean, sigma } => {
            let mut k = vec![0.0; order];
            k[0] = *mean;
            if order >= 2 {
                k[1] = sigma * sigma;
            }
            k
        }
        MeasureExpr::MarchenkoPastur { c } => vec![*c; order],
        MeasureExpr::Atomic { atoms } => {
            let mut m = vec![0.0f64; order];
            for &(x, w) in atoms {
                let mut pow = 1.0;
                for slot in m.iter_mut() {
                    pow *= x;
                    *slot += w * pow;
                }
            }
            moments_to_cumulants(&MomentSeries { vals: m }).vals
        }
        MeasureExpr::Dilate { t, of } => {
            let mut k = raw_cumulants(of, order);
            let mut pow = 1.0;
            for slot in k.iter_mut() {
                pow *= t;
                *slot *= pow;
            }
            k
        }
        MeasureExpr::Shift { s, of } => {
            let mut k = raw_cumulants(of, order);
            k[0] += s;
            k
        }
        MeasureExpr::FreeConv { terms } => {
            let mut k = vec![0.0f64; order];
            for term in terms {
                let child = raw_cumulants(&term.of, order);
                for (slot, v) in k.iter_mut().zip(child) {
                    *slot += term.power * v;
                }
            }
            k
        }
    }
}

/// Free cumulants `k_1 .. k_order` of the measure.
pub fn cumulants(mu: &MeasureExpr, order: usize) -> Result<CumulantSeries, SeriesError> {
    check_order(order)?;
    Ok(CumulantSeries { vals: raw_cumulants(mu, order) })
}

/// Moments `m_1 .. m_order` of the measure.
pub fn moments(mu: &MeasureExpr, order: usize) -> Result<MomentSeries, SeriesError> {
    Ok(cumulants_to_moments(&cumulants(mu, order)?))
}

/// Mean and variance, read off the first two cumulants.
pub fn mean_var(mu: &MeasureExpr) -> (f64, f64) {
    let k = raw_cumulants(mu, 2);
    (k[0], k[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(c: f64) -> MeasureExpr {
        MeasureExpr::MarchenkoPastur { c }
    }

    fn sc(mean: f64, sigma: f64) -> MeasureExpr {
        MeasureExpr::Semicircle { mean, sigma }
    }

    #[test]
    fn standard_marchenko_pastur_moments_are_catalan() {
        let m = moments(&mp(1.0), 6).unwrap();
        for (p, expect) in [1.0, 2.0, 5.0, 14.0, 42.0, 132.0].iter().enumerate() {
            assert!((m.get(p + 1) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn centered_semicircle_moments_are_catalan_in_even_orders() {
        let m = moments(&sc(0.0, 1.0), 8).unwrap();
        assert_eq!(m.get(1), 0.0);
        assert!((m.get(2) - 1.0).abs() < 1e-13);
        assert_eq!(m.get(3), 0.0);
        assert!((m.get(4) - 2.0).abs() < 1e-13);
        assert!((m.get(6) - 5.0).abs() < 1e-12);
        assert!((m.get(8) - 14.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_bernoulli_cumulants() {
        let mu = MeasureExpr::atomic(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let k = cumulants(&mu, 4).unwrap();
        assert!((k.get(1) - 0.5).abs() < 1e-15);
        assert!((k.get(2) - 0.25).abs() < 1e-15);
        assert!(k.get(3).abs() < 1e-15);
        assert!((k.get(4) + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn round_trip_on_a_lumpy_atomic_measure() {
        let mu = MeasureExpr::atomic(vec![(-2.0, 0.2), (-0.3, 0.1), (0.5, 0.4), (3.0, 0.3)]).unwrap();
        let m = moments(&mu, 16).unwrap();
        let back = cumulants_to_moments(&moments_to_cumulants(&m));
        for p in 1..=16 {
            let scale = 1.0 + m.get(p).abs();
            assert!((back.get(p) - m.get(p)).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn dilation_scales_cumulants_homogeneously() {
        let mu = MeasureExpr::dilate(-1.5, mp(2.0)).unwrap();
        let k = cumulants(&mu, 5).unwrap();
        for p in 1..=5 {
            let expect = 2.0 * (-1.5f64).powi(p as i32);
            assert!((k.get(p) - expect).abs() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn shift_moves_only_the_first_cumulant() {
        let base = cumulants(&sc(1.0, 2.0), 4).unwrap();
        let shifted = cumulants(&MeasureExpr::shift(-3.0, sc(1.0, 2.0)).unwrap(), 4).unwrap();
        assert!((shifted.get(1) - (base.get(1) - 3.0)).abs() < 1e-15);
        for p in 2..=4 {
            assert_eq!(shifted.get(p), base.get(p));
        }
    }

    #[test]
    fn convolution_adds_cumulants_linearly() {
        let mu = MeasureExpr::free_conv(vec![(mp(1.0), 2.5), (sc(0.0, 1.0), 3.0)]).unwrap();
        let k = cumulants(&mu, 4).unwrap();
        assert!((k.get(1) - 2.5).abs() < 1e-14);
        assert!((k.get(2) - 5.5).abs() < 1e-14);
        assert!((k.get(3) - 2.5).abs() < 1e-14);
        assert!((k.get(4) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn order_limits_are_enforced() {
        assert!(matches!(moments(&mp(1.0), 0), Err(SeriesError::OrderZero)));
        assert!(matches!(moments(&mp(1.0), 25), Err(SeriesError::OrderTooLarge(25))));
        assert!(moments(&mp(1.0), 24).is_ok());
    }

    #[test]
    fn hankel_check_accepts_real_moments_and_rejects_fakes() {
        assert!(moments(&mp(3.0), 10).unwrap().hankel_psd());
        let fake = MomentSeries::from_vec(vec![0.0, 1.0, 0.0, 0.5]).unwrap();
        assert!(!fake.hankel_psd());
    }

    #[test]
    fn mean_var_of_dilated_shifted_semicircle() {
        let mu = MeasureExpr::shift(1.0, MeasureExpr::dilate(-2.0, sc(0.5, 1.5)).unwrap()).unwrap();
        let (mean, var) = mean_var(&mu);
        assert!((mean - 0.0).abs() < 1e-15);
        assert!((var - 9.0).abs() < 1e-12);
    }
}
