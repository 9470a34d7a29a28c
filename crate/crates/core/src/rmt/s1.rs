//! Lower bounds on the S(1) norm by alternating maximization over product
//! vectors.
//!
//! The S(1) norm of a Hermitian bipartite matrix is the largest
//! `|<x (x) y, X x (x) y>|` over unit product vectors. Fixing one factor
//! turns the objective into a small Hermitian eigenproblem in the other, so
//! alternating eigenvector updates never decrease the objective; random
//! restarts guard against local maxima.

use super::{BipartiteMatrix, RmtError};
use crate::linalg::CMatrix;
use crate::rmt::sample::rng_for;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const ALT_TOL: f64 = 1e-12;

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for z in &mut v {
                *z /= norm;
            }
            return v;
        }
    }
}

/// Compresses the environment factor: `M(y)_{ij} = <e_i (x) y, X e_j (x) y>`.
fn system_matrix(x: &BipartiteMatrix, y: &[Complex64]) -> CMatrix {
    let (n, d) = (x.n(), x.d());
    let mat = x.matrix();
    CMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..d {
            let yb = y[b];
            if yb == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for a in 0..d {
                inner += y[a].conj() * mat[(i * d + a, j * d + b)];
            }
            acc += inner * yb;
        }
        acc
    })
}

/// Compresses the system factor: `N(v)_{ab} = <v (x) e_a, X v (x) e_b>`.
fn environment_matrix(x: &BipartiteMatrix, v: &[Complex64]) -> CMatrix {
    let (n, d) = (x.n(), x.d());
    let mat = x.matrix();
    let mut out = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            let weight = v[i].conj() * v[j];
            if weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..d {
                for a in 0..d {
                    out[(a, b)] += weight * mat[(i * d + a, j * d + b)];
                }
            }
        }
    }
    out
}

/// Eigenvector of the eigenvalue largest in absolute value, with that
/// absolute value. Input eigensystem is ascending.
fn dominant(w: &[f64], vecs: &CMatrix) -> (f64, Vec<Complex64>) {
    let last = w.len() - 1;
    let idx = if w[0].abs() > w[last].abs() { 0 } else { last };
    let col = (0..vecs.rows()).map(|i| vecs[(i, idx)]).collect();
    (w[idx].abs(), col)
}

/// Best product-vector overlap `|<x (x) y, X x (x) y>|` found by alternating
/// maximization with `restarts` independent starting points.
///
/// The result is a lower bound on the S(1) norm, nondecreasing in the number
/// of restarts, and never exceeds the spectral radius of `X`.
pub fn estimate_s1_norm(
    x: &BipartiteMatrix,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<f64, RmtError> {
    if restarts < 8 {
        return Err(RmtError::TooFewRestarts(restarts));
    }
    let sweeps = iters.max(1);
    let mut best = 0.0f64;
    for restart in 0..restarts {
        let mut rng = rng_for(seed, restart as u64 + 1);
        let mut y = random_unit(x.d(), &mut rng);
        let mut value = 0.0f64;
        for _ in 0..sweeps {
            let m = system_matrix(x, &y);
            let (wm, vm) = m.eigh()?;
            let (_, v) = dominant(&wm, &vm);
            let nmat = environment_matrix(x, &v);
            let (wn, vn) = nmat.eigh()?;
            let (val, y_next) = dominant(&wn, &vn);
            y = y_next;
            if (val - value).abs() <= ALT_TOL * (1.0 + val) {
                value = val;
                break;
            }
            value = val;
        }
        best = best.max(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::sample::{haar_unitary, sample_gue};

    /// Kronecker product of two small Hermitian matrices as a bipartite
    /// matrix.
    fn kron(a: &CMatrix, b: &CMatrix) -> BipartiteMatrix {
        let (n, d) = (a.rows(), b.rows());
        let mat = CMatrix::from_fn(n * d, n * d, |row, col| {
            let (i, p) = (row / d, row % d);
            let (j, q) = (col / d, col % d);
            a[(i, j)] * b[(p, q)]
        });
        BipartiteMatrix::new(n, d, mat).unwrap()
    }

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn product_psd_matrices_attain_the_product_of_norms() {
        let a = diag(&[0.5, 2.0, 1.0]);
        let b = diag(&[3.0, 1.0, 0.25, 0.5]);
        let x = kron(&a, &b);
        let value = estimate_s1_norm(&x, 8, 40, 1).unwrap();
        assert!((value - 6.0).abs() < 1e-9, "value = {value}");
    }

    #[test]
    fn rotated_product_matrices_still_attain_the_product_norm() {
        let mut rng = rng_for(2, 0);
        let ua = haar_unitary(3, &mut rng).unwrap();
        let ub = haar_unitary(5, &mut rng).unwrap();
        let da = diag(&[2.0, 0.5, 1.0]);
        let db = diag(&[1.5, 0.2, 0.7, 1.0, 0.4]);
        let a = ua.mul(&da).unwrap().mul_adjoint(&ua).unwrap();
        let b = ub.mul(&db).unwrap().mul_adjoint(&ub).unwrap();
        let x = kron(&a, &b);
        let value = estimate_s1_norm(&x, 12, 60, 3).unwrap();
        assert!((value - 3.0).abs() < 1e-7, "value = {value}");
    }

    #[test]
    fn estimates_never_exceed_the_spectral_radius() {
        let g = sample_gue(60, 17).unwrap();
        let x = BipartiteMatrix::new(3, 20, g).unwrap();
        let w = x.eigvals().unwrap();
        let radius = w[0].abs().max(w[w.len() - 1].abs());
        let value = estimate_s1_norm(&x, 8, 30, 5).unwrap();
        assert!(value <= radius + 1e-10, "value {value} > radius {radius}");
        assert!(value > 0.0);
    }

    #[test]
    fn more_restarts_never_hurt() {
        let g = sample_gue(40, 23).unwrap();
        let x = BipartiteMatrix::new(2, 20, g).unwrap();
        let few = estimate_s1_norm(&x, 8, 25, 7).unwrap();
        let many = estimate_s1_norm(&x, 16, 25, 7).unwrap();
        assert!(many >= few - 1e-12);
    }

    #[test]
    fn too_few_restarts_is_an_error() {
        let g = sample_gue(8, 0).unwrap();
        let x = BipartiteMatrix::new(2, 4, g).unwrap();
        assert!(matches!(
            estimate_s1_norm(&x, 7, 10, 0),
            Err(RmtError::TooFewRestarts(7))
        ));
    }
}
