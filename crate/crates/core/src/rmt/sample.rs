//! Seeded samplers for the matrix ensembles under study.
//!
//! All randomness flows through a counter-based generator keyed by
//! `(seed, stream)`, so independent trials can draw from disjoint streams
//! of one seed and every result is reproducible.

use super::RmtError;
use crate::linalg::CMatrix;
use crate::spectra::{quantile, MeasureExpr};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator for one `(seed, stream)` pair. Streams partition the output of
/// a single seed into independent sequences, one per trial.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian with unit second absolute moment.
fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// GUE matrix normalized so the spectrum converges to the standard
/// semicircle law: real N(0, 1/dim) diagonal, complex entries of variance
/// 1/dim off the diagonal.
pub fn sample_gue(dim: usize, seed: u64) -> Result<CMatrix, RmtError> {
    if dim == 0 {
        return Err(RmtError::EmptyDimension);
    }
    let mut rng = rng_for(seed, 0);
    let diag_scale = 1.0 / (dim as f64).sqrt();
    let off_scale = 1.0 / (2.0 * dim as f64).sqrt();
    let mut mat = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let g: f64 = rng.sample(StandardNormal);
        mat[(j, j)] = Complex64::new(g * diag_scale, 0.0);
        for k in j + 1..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(re * off_scale, im * off_scale);
            mat[(j, k)] = z;
            mat[(k, j)] = z.conj();
        }
    }
    Ok(mat)
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix, with the
/// R diagonal's phases folded back in to remove the QR gauge bias.
pub fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Result<CMatrix, RmtError> {
    if dim == 0 {
        return Err(RmtError::EmptyDimension);
    }
    let mut q = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            q[(i, j)] = standard_complex(rng);
        }
    }
    let r_diag = q.orthonormalize_columns()?;
    for (j, r) in r_diag.iter().enumerate() {
        let modulus = r.norm();
        let phase = if modulus > 0.0 { *r / modulus } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Unitarily invariant matrix with deterministic spectrum: the eigenvalues
/// are the quantiles `F^{-1}((i + 1/2)/dim)` of `mu` and the eigenbasis is
/// Haar. Extreme eigenvalues then converge to the support edges from the
/// inside as `dim` grows.
pub fn sample_invariant(mu: &MeasureExpr, dim: usize, seed: u64) -> Result<CMatrix, RmtError> {
    if dim == 0 {
        return Err(RmtError::EmptyDimension);
    }
    let mut lambda = Vec::with_capacity(dim);
    for i in 0..dim {
        let level = (i as f64 + 0.5) / dim as f64;
        lambda.push(quantile(mu, level)?);
    }
    let mut rng = rng_for(seed, 0);
    let u = haar_unitary(dim, &mut rng)?;
    let mut scaled = u.clone();
    for (j, l) in lambda.iter().enumerate() {
        for i in 0..dim {
            scaled[(i, j)] *= Complex64::new(*l, 0.0);
        }
    }
    let mut x = scaled.mul_adjoint(&u)?;
    // Symmetrize away the last bits of round-off so downstream Hermiticity
    // checks see a clean matrix.
    for j in 0..dim {
        for i in 0..j {
            let avg = 0.5 * (x[(i, j)] + x[(j, i)].conj());
            x[(i, j)] = avg;
            x[(j, i)] = avg.conj();
        }
        let d = x[(j, j)];
        x[(j, j)] = Complex64::new(d.re, 0.0);
    }
    Ok(x)
}

/// Wishart-type bipartite matrix `G G^* / (nd)` with `G` complex Ginibre of
/// size (nd) x ceil(c*nd); the spectrum converges to the Marchenko-Pastur
/// law of ratio `c`.
pub fn sample_wishart(
    n: usize,
    d: usize,
    c: f64,
    seed: u64,
) -> Result<super::BipartiteMatrix, RmtError> {
    if n == 0 || d == 0 {
        return Err(RmtError::EmptyDimension);
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(RmtError::BadAspectRatio(c));
    }
    let dim = n * d;
    let cols = ((c * dim as f64).ceil() as usize).max(1);
    let mut rng = rng_for(seed, 0);
    let mut g = CMatrix::zeros(dim, cols);
    for j in 0..cols {
        for i in 0..dim {
            g[(i, j)] = standard_complex(&mut rng);
        }
    }
    let x = g.aat_hermitian(1.0 / dim as f64)?;
    super::BipartiteMatrix::new(n, d, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frobenius_m2(mat: &CMatrix) -> f64 {
        let dim = mat.rows();
        let mut acc = 0.0;
        for j in 0..dim {
            for i in 0..dim {
                acc += mat[(i, j)].norm_sqr();
            }
        }
        acc / dim as f64
    }

    #[test]
    fn gue_is_hermitian_with_unit_second_moment() {
        let x = sample_gue(300, 7).unwrap();
        assert_eq!(x.hermiticity_defect(), 0.0);
        let m2 = frobenius_m2(&x);
        assert!((m2 - 1.0).abs() < 0.08, "m2 = {m2}");
    }

    #[test]
    fn gue_is_deterministic_per_seed() {
        let a = sample_gue(40, 11).unwrap();
        let b = sample_gue(40, 11).unwrap();
        let c = sample_gue(40, 12).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = rng_for(3, 0);
        let u = haar_unitary(24, &mut rng).unwrap();
        let prod = u.mul_adjoint(&u).unwrap();
        for i in 0..24 {
            for j in 0..24 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn invariant_samples_carry_the_prescribed_quantiles() {
        let mu = MeasureExpr::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let x = sample_invariant(&mu, 30, 5).unwrap();
        let w = x.eigvalsh().unwrap();
        for (i, v) in w.iter().enumerate() {
            let expect = if i < 15 { -1.0 } else { 1.0 };
            assert!((v - expect).abs() < 1e-10, "eigenvalue {i} = {v}");
        }
    }

    #[test]
    fn invariant_point_mass_is_the_identity() {
        let mu = MeasureExpr::point_mass(1.0).unwrap();
        let x = sample_invariant(&mu, 16, 1).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((x[(i, j)] - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn invariant_sampling_rejects_convolution_trees() {
        let sc = MeasureExpr::semicircle(0.0, 1.0).unwrap();
        let mp = MeasureExpr::marchenko_pastur(1.0).unwrap();
        let tree = MeasureExpr::free_conv(vec![(sc, 1.0), (mp, 1.0)]).unwrap();
        assert!(matches!(
            sample_invariant(&tree, 8, 0),
            Err(RmtError::Quantile(_))
        ));
    }

    #[test]
    fn wishart_moments_match_marchenko_pastur() {
        // MP_c has mean c and variance c, so m2 = c + c^2.
        let c = 2.0;
        let x = sample_wishart(2, 100, c, 9).unwrap();
        let tr: f64 = (0..x.dim()).map(|i| x.matrix()[(i, i)].re).sum();
        let m1 = tr / x.dim() as f64;
        let m2 = frobenius_m2(x.matrix());
        assert!((m1 - c).abs() < 0.15, "m1 = {m1}");
        assert!((m2 - (c + c * c)).abs() < 0.5, "m2 = {m2}");
    }

    #[test]
    fn tiny_wishart_is_positive() {
        let x = sample_wishart(1, 1, 1.0, 4).unwrap();
        assert!(x.matrix()[(0, 0)].re >= 0.0);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(matches!(sample_gue(0, 1), Err(RmtError::EmptyDimension)));
        assert!(matches!(sample_wishart(2, 2, 0.0, 1), Err(RmtError::BadAspectRatio(_))));
        assert!(matches!(sample_wishart(2, 2, f64::NAN, 1), Err(RmtError::BadAspectRatio(_))));
    }
}
