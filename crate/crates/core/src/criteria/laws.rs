//! Limiting spectral laws of block-modified matrices.
//!
//! When an n*d x n*d unitarily invariant matrix with limiting law `mu` is
//! hit blockwise by a map with Choi eigenvalues `lambda_i` of multiplicity
//! `r_i`, the spectrum converges to the free convolution
//! `boxplus_i (D_{lambda_i / n} mu)^{boxplus r_i}` as d grows. The helpers
//! here build that law for a general eigenvalue spec and for the three maps
//! used by the positivity criteria: partial transposition and the two
//! extremal depolarizing maps.

use super::{ChoiSpec, CriteriaError};
use crate::spectra::MeasureExpr;

/// Law of the block-modified matrix for an arbitrary Choi eigenvalue spec.
///
/// Zero eigenvalues contribute point masses at the origin under dilation and
/// are dropped from the convolution; if every eigenvalue is zero the law is
/// the point mass at zero.
pub fn modified_measure(mu: &MeasureExpr, spec: &ChoiSpec) -> Result<MeasureExpr, CriteriaError> {
    let n = spec.n() as f64;
    let lambda_scale = spec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |acc, &(l, _)| acc.max(l.abs()));
    let mut terms = Vec::new();
    for &(lambda, mult) in spec.eigenvalues() {
        if lambda.abs() <= 1e-12 * lambda_scale.max(1.0) {
            continue;
        }
        terms.push((MeasureExpr::dilate(lambda / n, mu.clone())?, mult as f64));
    }
    match terms.len() {
        0 => Ok(MeasureExpr::point_mass(0.0)?),
        1 if terms[0].1 == 1.0 => {
            let of = terms.into_iter().next().unwrap().0;
            if let MeasureExpr::Dilate { t, of: inner } = &of {
                if *t == 1.0 {
                    return Ok(inner.as_ref().clone());
                }
            }
            Ok(of)
        }
        _ => Ok(MeasureExpr::free_conv(terms)?),
    }
}

/// Law of the partial transpose of a block-invariant matrix:
/// `(D_{1/n} mu)^{boxplus n(n+1)/2} boxplus (D_{-1/n} mu)^{boxplus n(n-1)/2}`.
pub fn gamma_measure(mu: &MeasureExpr, n: usize) -> Result<MeasureExpr, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let nf = n as f64;
    Ok(MeasureExpr::free_conv(vec![
        (MeasureExpr::dilate(1.0 / nf, mu.clone())?, nf * (nf + 1.0) / 2.0),
        (MeasureExpr::dilate(-1.0 / nf, mu.clone())?, nf * (nf - 1.0) / 2.0),
    ])?)
}

/// Law for the entanglement-breaking endpoint `X -> (n+1) X - Tr(X) I`:
/// `D_{(n^2+n-1)/n} mu boxplus (D_{-1/n} mu)^{boxplus (n^2-1)}`.
pub fn delta_plus_measure(mu: &MeasureExpr, n: usize) -> Result<MeasureExpr, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let nf = n as f64;
    Ok(MeasureExpr::free_conv(vec![
        (MeasureExpr::dilate((nf * nf + nf - 1.0) / nf, mu.clone())?, 1.0),
        (MeasureExpr::dilate(-1.0 / nf, mu.clone())?, nf * nf - 1.0),
    ])?)
}

/// Law for the entanglement-breaking endpoint `X -> n Tr(X) I - (n^2-1) X`,
/// normalized so that the mean of `mu` is preserved:
/// `(D_{-1} mu)^{boxplus (n^2-2)} boxplus mu^{boxplus (n^2-1)}`.
///
/// Its variance is `(2n^2 - 3) var(mu)`, which crosses the delta-plus
/// variance `(n^4 + 2n^3 - 2n)/n^2 var(mu)` exactly at n = 2.
pub fn delta_minus_measure(mu: &MeasureExpr, n: usize) -> Result<MeasureExpr, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let nf = n as f64;
    Ok(MeasureExpr::free_conv(vec![
        (MeasureExpr::dilate(-1.0, mu.clone())?, nf * nf - 2.0),
        (mu.clone(), nf * nf - 1.0),
    ])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::choi::{check_unitarity, transpose_choi, DEFAULT_GROUP_TOL};
    use crate::criteria::ChoiSpec;
    use crate::spectra::{cumulants, mean_var, moments};

    fn semicircle() -> MeasureExpr {
        MeasureExpr::semicircle(0.0, 1.0).unwrap()
    }

    #[test]
    fn gamma_law_agrees_with_the_flip_choi_route() {
        let mu = MeasureExpr::marchenko_pastur(3.0).unwrap();
        let spec = check_unitarity(&transpose_choi(2), 2, DEFAULT_GROUP_TOL).unwrap();
        let via_choi = modified_measure(&mu, &spec).unwrap();
        let direct = gamma_measure(&mu, 2).unwrap();
        let a = cumulants(&via_choi, 10).unwrap();
        let b = cumulants(&direct, 10).unwrap();
        for p in 1..=10 {
            assert!((a.get(p) - b.get(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn semicircle_is_invariant_under_the_gamma_law() {
        let mu = semicircle();
        for n in 2..=5 {
            let gamma = gamma_measure(&mu, n).unwrap();
            let (m, var) = mean_var(&gamma);
            assert!(m.abs() < 1e-14);
            assert!((var - 1.0).abs() < 1e-14);
            let k = cumulants(&gamma, 8).unwrap();
            for p in 3..=8 {
                assert!(k.get(p).abs() < 1e-13, "kappa_{p} = {}", k.get(p));
            }
        }
    }

    #[test]
    fn delta_variances_match_their_closed_forms_and_cross_at_two() {
        let mu = MeasureExpr::atomic(vec![(0.0, 0.4), (2.0, 0.6)]).unwrap();
        let (m0, v0) = mean_var(&mu);
        for n in 2..=6usize {
            let nf = n as f64;
            let (mp, vp) = mean_var(&delta_plus_measure(&mu, n).unwrap());
            let (mm, vm) = mean_var(&delta_minus_measure(&mu, n).unwrap());
            assert!((mp - m0).abs() < 1e-12);
            assert!((mm - m0).abs() < 1e-12);
            let sp2 = (nf.powi(4) + 2.0 * nf.powi(3) - 2.0 * nf) / (nf * nf);
            let sm2 = 2.0 * nf * nf - 3.0;
            assert!((vp - sp2 * v0).abs() < 1e-10 * sp2);
            assert!((vm - sm2 * v0).abs() < 1e-10 * sm2);
            if n == 2 {
                assert!(vp > vm);
            } else {
                assert!(vp < vm);
            }
        }
    }

    #[test]
    fn identity_spec_returns_the_measure_unchanged() {
        let mu = MeasureExpr::marchenko_pastur(2.0).unwrap();
        let spec = ChoiSpec::direct(3, vec![(3.0, 1), (0.0, 8)]).unwrap();
        let out = modified_measure(&mu, &spec).unwrap();
        let a = moments(&out, 8).unwrap();
        let b = moments(&mu, 8).unwrap();
        for p in 1..=8 {
            assert!((a.get(p) - b.get(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn all_zero_spec_collapses_to_a_point_mass_at_zero() {
        let mu = semicircle();
        let spec = ChoiSpec::direct(2, vec![(0.0, 4)]).unwrap();
        let out = modified_measure(&mu, &spec).unwrap();
        assert_eq!(out, MeasureExpr::point_mass(0.0).unwrap());
    }

    #[test]
    fn small_dimensions_are_rejected() {
        let mu = semicircle();
        assert!(matches!(gamma_measure(&mu, 1), Err(CriteriaError::BadDimension(1))));
        assert!(matches!(gamma_measure(&mu, 0), Err(CriteriaError::BadDimension(0))));
        assert!(delta_plus_measure(&mu, 1).is_err());
        assert!(delta_minus_measure(&mu, 1).is_err());
    }
}
