//! Bipartite block structure on Hermitian matrices.
//!
//! An (n*d) x (n*d) Hermitian matrix is viewed as an n x n array of d x d
//! blocks, with row index `i*d + a` for system index i and environment
//! index a. Partial transposition and Choi-defined block maps act on the
//! system factor only.

use super::RmtError;
use crate::linalg::CMatrix;

/// Hermitian matrix carrying an n x d tensor factorization of its index
/// space.
#[derive(Debug, Clone)]
pub struct BipartiteMatrix {
    n: usize,
    d: usize,
    mat: CMatrix,
}

impl BipartiteMatrix {
    /// Wraps a matrix after checking squareness, the n*d factorization, and
    /// Hermiticity to relative 1e-10.
    pub fn new(n: usize, d: usize, mat: CMatrix) -> Result<BipartiteMatrix, RmtError> {
        if n == 0 || d == 0 {
            return Err(RmtError::EmptyDimension);
        }
        let dim = n * d;
        if mat.rows() != dim || mat.cols() != dim {
            return Err(RmtError::BadFactorization { rows: mat.rows(), cols: mat.cols(), n, d });
        }
        let defect = mat.hermiticity_defect();
        if defect > 1e-10 * mat.max_abs().max(1.0) {
            return Err(RmtError::NotHermitian(defect));
        }
        Ok(BipartiteMatrix { n, d, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.n * self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Eigenvalues in ascending order.
    pub fn eigvals(&self) -> Result<Vec<f64>, RmtError> {
        Ok(self.mat.eigvalsh()?)
    }

    /// Smallest and largest eigenvalue.
    pub fn extremes(&self) -> Result<(f64, f64), RmtError> {
        let w = self.eigvals()?;
        Ok((w[0], w[w.len() - 1]))
    }
}

/// Transposes the n x n block structure: block (i, j) moves to block (j, i).
///
/// This is the partial transpose on the system factor; it is an involution
/// and preserves Hermiticity, trace, and Frobenius norm.
pub fn partial_transpose(x: &BipartiteMatrix) -> BipartiteMatrix {
    let (n, d) = (x.n, x.d);
    let mat = CMatrix::from_fn(n * d, n * d, |row, col| {
        let (i, a) = (row / d, row % d);
        let (j, b) = (col / d, col % d);
        x.mat[(j * d + a, i * d + b)]
    });
    BipartiteMatrix { n, d, mat }
}

/// Applies the block map with the given n^2 x n^2 Choi matrix to the system
/// factor: `Y[(r,a),(s,b)] = sum_{p,q} C[(r,p),(s,q)] X[(p,a),(q,b)]`.
///
/// The contraction is carried out as one matrix product between the
/// pair-permuted Choi matrix and the matrix reshaped to (pq) x (ab) form.
pub fn apply_block_map(x: &BipartiteMatrix, choi: &CMatrix) -> Result<BipartiteMatrix, RmtError> {
    let (n, d) = (x.n, x.d);
    if choi.rows() != n * n || choi.cols() != n * n {
        return Err(RmtError::ChoiMismatch { rows: choi.rows(), cols: choi.cols(), n });
    }
    let defect = choi.hermiticity_defect();
    if defect > 1e-10 * choi.max_abs().max(1.0) {
        return Err(RmtError::NotHermitian(defect));
    }

    let mut reshaped = CMatrix::zeros(n * n, d * d);
    for p in 0..n {
        for q in 0..n {
            let row = p * n + q;
            for b in 0..d {
                for a in 0..d {
                    reshaped[(row, a * d + b)] = x.mat[(p * d + a, q * d + b)];
                }
            }
        }
    }
    let paired = CMatrix::from_fn(n * n, n * n, |rs, pq| {
        let (r, s) = (rs / n, rs % n);
        let (p, q) = (pq / n, pq % n);
        choi[(r * n + p, s * n + q)]
    });
    let product = paired.mul(&reshaped)?;

    let mut out = CMatrix::zeros(n * d, n * d);
    for r in 0..n {
        for s in 0..n {
            let row = r * n + s;
            for b in 0..d {
                for a in 0..d {
                    out[(r * d + a, s * d + b)] = product[(row, a * d + b)];
                }
            }
        }
    }
    BipartiteMatrix::new(n, d, out)
}
