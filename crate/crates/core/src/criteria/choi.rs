//! Choi matrices of block maps and the unitarity condition.
//!
//! A linear map `phi` on n x n matrices is encoded by its Choi matrix
//! `C = sum_{pq} phi(E_pq) (x) E_pq`, an n^2 x n^2 matrix indexed by pairs
//! `(r, p)` with entry `C[(r,p),(s,q)] = phi(E_pq)[r,s]`. The limiting
//! spectral law of a block-modified random matrix only depends on the
//! eigenvalues of `C`, provided every eigenprojector has partial trace
//! proportional to the identity (the unitarity condition).

use super::CriteriaError;
use crate::linalg::CMatrix;
use num_complex::Complex64;

/// Default tolerance for grouping nearby Choi eigenvalues into one
/// eigenspace before testing the unitarity condition.
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

/// Eigenvalue data of a Choi matrix satisfying the unitarity condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiSpec {
    n: usize,
    eigenvalues: Vec<(f64, usize)>,
    checked: bool,
}

impl ChoiSpec {
    /// Builds a spec from an explicit eigenvalue list `(lambda, multiplicity)`.
    ///
    /// The multiplicities must sum to `n^2` and the values must be distinct.
    /// Specs entered this way never saw a unitarity check; they are marked
    /// unchecked and reported as such.
    pub fn direct(n: usize, eigenvalues: Vec<(f64, usize)>) -> Result<ChoiSpec, CriteriaError> {
        if n < 2 {
            return Err(CriteriaError::BadDimension(n));
        }
        let total: usize = eigenvalues.iter().map(|e| e.1).sum();
        if total != n * n {
            return Err(CriteriaError::BadMultiplicity { got: total, expect: n * n });
        }
        let mut sorted = eigenvalues;
        for &(lambda, mult) in &sorted {
            if !lambda.is_finite() {
                return Err(CriteriaError::BadEigenvalue(lambda));
            }
            if mult == 0 {
                return Err(CriteriaError::BadEigenvalue(lambda));
            }
        }
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(CriteriaError::DuplicateEigenvalue(pair[0].0));
            }
        }
        Ok(ChoiSpec { n, eigenvalues: sorted, checked: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues with multiplicities, sorted descending.
    pub fn eigenvalues(&self) -> &[(f64, usize)] {
        &self.eigenvalues
    }

    /// Whether this spec came out of [`check_unitarity`] rather than direct
    /// entry.
    pub fn is_checked(&self) -> bool {
        self.checked
    }
}

/// Verifies the unitarity condition of a Choi matrix and extracts its
/// eigenvalue data.
///
/// Eigenvalues closer than `group_tol` (times the spectral scale) are merged
/// into one eigenspace; each eigenprojector `P` must then satisfy
/// `(id (x) Tr)(P) = (mult/n) I_n`. Use [`DEFAULT_GROUP_TOL`] unless the
/// matrix has deliberately close eigenvalues.
pub fn check_unitarity(
    choi: &CMatrix,
    n: usize,
    group_tol: f64,
) -> Result<ChoiSpec, CriteriaError> {
    if n < 2 {
        return Err(CriteriaError::BadDimension(n));
    }
    let dim = n * n;
    if choi.rows() != dim || choi.cols() != dim {
        return Err(CriteriaError::ChoiShape {
            rows: choi.rows(),
            cols: choi.cols(),
            expect: dim,
        });
    }
    let scale = choi.max_abs().max(1.0);
    let defect = choi.hermiticity_defect();
    if defect > 1e-10 * scale {
        return Err(CriteriaError::NotHermitian(defect));
    }

    let (w, v) = choi.eigh()?;
    let w_scale = w.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let mut eigenvalues = Vec::new();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (w[end] - w[end - 1]).abs() <= group_tol * w_scale {
            end += 1;
        }
        let mult = end - start;
        let lambda = w[start..end].iter().sum::<f64>() / mult as f64;

        // Partial trace of the eigenprojector over the second factor:
        // reshape each eigenvector as an n x n matrix A with A[r, p] =
        // v[r*n + p]; the partial trace is sum_k A_k A_k^H.
        let mut pt = CMatrix::zeros(n, n);
        for k in start..end {
            for r in 0..n {
                for s in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for p in 0..n {
                        acc += v[(r * n + p, k)] * v[(s * n + p, k)].conj();
                    }
                    pt[(r, s)] += acc;
                }
            }
        }
        let target = mult as f64 / n as f64;
        let mut dev = 0.0f64;
        for r in 0..n {
            for s in 0..n {
                let expect = if r == s { target } else { 0.0 };
                dev = dev.max((pt[(r, s)] - expect).norm());
            }
        }
        if dev > group_tol * (mult as f64).max(1.0) {
            return Err(CriteriaError::UnitarityViolation { lambda, defect: dev });
        }
        eigenvalues.push((lambda, mult));
        start = end;
    }
    eigenvalues.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(ChoiSpec { n, eigenvalues, checked: true })
}

/// Choi matrix of the transposition map: the flip operator
/// `F[(r,p),(s,q)] = [r = q][p = s]`.
pub fn transpose_choi(n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |row, col| {
        let (r, p) = (row / n, row % n);
        let (s, q) = (col / n, col % n);
        if r == q && p == s {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Choi matrix of the identity map: `n` times the maximally entangled
/// projector, `C[(r,p),(s,q)] = [r = p][s = q]`.
pub fn identity_choi(n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |row, col| {
        let (r, p) = (row / n, row % n);
        let (s, q) = (col / n, col % n);
        if r == p && s == q {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Choi matrix of `X -> (n+1) X - Tr(X) I`, the entanglement-breaking
/// endpoint of the depolarizing family on the positive side.
pub fn depolarizing_plus_choi(n: usize) -> CMatrix {
    let mut c = identity_choi(n);
    c.scale(Complex64::new(n as f64 + 1.0, 0.0));
    for i in 0..n * n {
        c[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    c
}

/// Choi matrix of `X -> n Tr(X) I - (n^2 - 1) X`, the entanglement-breaking
/// endpoint on the negative side.
pub fn depolarizing_minus_choi(n: usize) -> CMatrix {
    let nf = n as f64;
    let mut c = identity_choi(n);
    c.scale(Complex64::new(-(nf * nf - 1.0), 0.0));
    for i in 0..n * n {
        c[(i, i)] += Complex64::new(nf, 0.0);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_spec_has_symmetric_and_antisymmetric_multiplicities() {
        let spec = check_unitarity(&transpose_choi(2), 2, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(spec.eigenvalues(), &[(1.0, 3), (-1.0, 1)]);
        assert!(spec.is_checked());
        let spec = check_unitarity(&transpose_choi(4), 4, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(spec.eigenvalues(), &[(1.0, 10), (-1.0, 6)]);
    }

    #[test]
    fn identity_spec_is_a_rank_one_spike() {
        let spec = check_unitarity(&identity_choi(3), 3, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(spec.eigenvalues().len(), 2);
        assert!((spec.eigenvalues()[0].0 - 3.0).abs() < 1e-12);
        assert_eq!(spec.eigenvalues()[0].1, 1);
        assert!(spec.eigenvalues()[1].0.abs() < 1e-12);
        assert_eq!(spec.eigenvalues()[1].1, 8);
    }

    #[test]
    fn depolarizing_specs_match_their_closed_forms() {
        let plus = check_unitarity(&depolarizing_plus_choi(3), 3, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(plus.eigenvalues().len(), 2);
        assert!((plus.eigenvalues()[0].0 - 11.0).abs() < 1e-12);
        assert_eq!(plus.eigenvalues()[0].1, 1);
        assert!((plus.eigenvalues()[1].0 + 1.0).abs() < 1e-12);
        assert_eq!(plus.eigenvalues()[1].1, 8);

        let minus = check_unitarity(&depolarizing_minus_choi(2), 2, DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(minus.eigenvalues().len(), 2);
        assert!((minus.eigenvalues()[0].0 - 2.0).abs() < 1e-12);
        assert_eq!(minus.eigenvalues()[0].1, 3);
        assert!((minus.eigenvalues()[1].0 + 4.0).abs() < 1e-12);
        assert_eq!(minus.eigenvalues()[1].1, 1);
    }

    #[test]
    fn non_unitary_choi_is_rejected_with_the_offending_eigenvalue() {
        // The Choi matrix of X -> X[0,0] E_00 is the rank-one projector onto
        // |00>, whose partial trace is E_00, not a multiple of the identity.
        let c = CMatrix::from_fn(4, 4, |row, col| {
            if row == 0 && col == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        match check_unitarity(&c, 2, DEFAULT_GROUP_TOL) {
            Err(CriteriaError::UnitarityViolation { .. }) => {}
            other => panic!("expected a unitarity violation, got {other:?}"),
        }
    }

    #[test]
    fn direct_specs_validate_multiplicities_and_distinctness() {
        let spec = ChoiSpec::direct(2, vec![(-1.0, 1), (1.0, 3)]).unwrap();
        assert_eq!(spec.eigenvalues(), &[(1.0, 3), (-1.0, 1)]);
        assert!(!spec.is_checked());
        assert!(matches!(
            ChoiSpec::direct(2, vec![(1.0, 3)]),
            Err(CriteriaError::BadMultiplicity { got: 3, expect: 4 })
        ));
        assert!(matches!(
            ChoiSpec::direct(2, vec![(1.0, 2), (1.0, 2)]),
            Err(CriteriaError::DuplicateEigenvalue(_))
        ));
    }

    #[test]
    fn nonhermitian_matrices_are_rejected() {
        let mut c = identity_choi(2);
        c[(0, 1)] = Complex64::new(0.5, 0.5);
        assert!(matches!(
            check_unitarity(&c, 2, DEFAULT_GROUP_TOL),
            Err(CriteriaError::NotHermitian(_))
        ));
    }
}
