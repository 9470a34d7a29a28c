//! Dense complex matrices backed directly by BLAS/LAPACK (OpenBLAS).
//!
//! Only the handful of operations the crate actually needs are exposed:
//! Hermitian eigendecomposition, QR orthonormalization, and matrix products.
//! Storage is column-major so buffers can be handed to Fortran routines
//! without copies.

pub use num_complex::Complex64;
use std::os::raw::{c_char, c_double, c_int};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix dimension {0} exceeds LAPACK's 32-bit index range")]
    TooLarge(usize),
    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
}

extern "C" {
    fn zheev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        w: *mut c_double,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut c_double,
        info: *mut c_int,
    );
    fn zgeqrf_(
        m: *const c_int,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        tau: *mut Complex64,
        work: *mut Complex64,
        lwork: *const c_int,
        info: *mut c_int,
    );
    fn zungqr_(
        m: *const c_int,
        n: *const c_int,
        k: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        tau: *const Complex64,
        work: *mut Complex64,
        lwork: *const c_int,
        info: *mut c_int,
    );
    fn zgemm_(
        transa: *const c_char,
        transb: *const c_char,
        m: *const c_int,
        n: *const c_int,
        k: *const c_int,
        alpha: *const Complex64,
        a: *const Complex64,
        lda: *const c_int,
        b: *const Complex64,
        ldb: *const c_int,
        beta: *const Complex64,
        c: *mut Complex64,
        ldc: *const c_int,
    );
    fn zherk_(
        uplo: *const c_char,
        trans: *const c_char,
        n: *const c_int,
        k: *const c_int,
        alpha: *const c_double,
        a: *const Complex64,
        lda: *const c_int,
        beta: *const c_double,
        c: *mut Complex64,
        ldc: *const c_int,
    );
    fn openblas_set_num_threads(n: c_int);
}

/// Caps the number of threads OpenBLAS may use. Call with 1 before running
/// trials on a thread pool so BLAS does not oversubscribe the cores.
pub fn set_blas_threads(n: usize) {
    let n = n.clamp(1, c_int::MAX as usize) as c_int;
    unsafe { openblas_set_num_threads(n) };
}

fn as_lapack_dim(n: usize) -> Result<c_int, LinalgError> {
    c_int::try_from(n).map_err(|_| LinalgError::TooLarge(n))
}

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a column-major matrix from an existing buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimMismatch(format!(
                "buffer of length {} cannot hold a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute deviation from `A = A^H`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.cols {
            for i in 0..=j.min(self.rows.saturating_sub(1)) {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.norm()))
    }

    /// `self * other` through zgemm.
    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix, LinalgError> {
        gemm(self, b'N', other, b'N')
    }

    /// `self * other^H` through zgemm.
    pub fn mul_adjoint(&self, other: &CMatrix) -> Result<CMatrix, LinalgError> {
        gemm(self, b'N', other, b'C')
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigvalsh(&self) -> Result<Vec<f64>, LinalgError> {
        let (w, _) = self.heev(false)?;
        Ok(w)
    }

    /// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMatrix), LinalgError> {
        let (w, v) = self.heev(true)?;
        Ok((w, v.expect("eigenvectors requested")))
    }

    fn heev(&self, vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>), LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok((Vec::new(), vectors.then(|| CMatrix::zeros(0, 0))));
        }
        let ni = as_lapack_dim(n)?;
        let jobz = if vectors { b'V' } else { b'N' } as c_char;
        let uplo = b'L' as c_char;
        let mut a = self.data.clone();
        let mut w = vec![0.0f64; n];
        let mut rwork = vec![0.0f64; 3 * n.max(1)];
        let mut info: c_int = 0;

        let mut query = [Complex64::new(0.0, 0.0)];
        let lwork_query: c_int = -1;
        unsafe {
            zheev_(
                &jobz,
                &uplo,
                &ni,
                a.as_mut_ptr(),
                &ni,
                w.as_mut_ptr(),
                query.as_mut_ptr(),
                &lwork_query,
                rwork.as_mut_ptr(),
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zheev (workspace query)",
                info,
            });
        }
        let lwork = (query[0].re as usize).max(2 * n);
        let lworki = as_lapack_dim(lwork)?;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork];
        unsafe {
            zheev_(
                &jobz,
                &uplo,
                &ni,
                a.as_mut_ptr(),
                &ni,
                w.as_mut_ptr(),
                work.as_mut_ptr(),
                &lworki,
                rwork.as_mut_ptr(),
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zheev",
                info,
            });
        }
        let vecs = vectors.then(|| CMatrix {
            rows: n,
            cols: n,
            data: a,
        });
        Ok((w, vecs))
    }

    /// Replaces the columns with an orthonormal basis of their span (QR) and
    /// returns the diagonal of the R factor.
    pub fn orthonormalize_columns(&mut self) -> Result<Vec<Complex64>, LinalgError> {
        let (m, n) = (self.rows, self.cols);
        if m < n {
            return Err(LinalgError::DimMismatch(format!(
                "cannot orthonormalize {n} columns of length {m}"
            )));
        }
        let mi = as_lapack_dim(m)?;
        let ni = as_lapack_dim(n)?;
        let mut tau = vec![Complex64::new(0.0, 0.0); n.min(m)];
        let mut info: c_int = 0;

        let mut query = [Complex64::new(0.0, 0.0)];
        let lwork_query: c_int = -1;
        unsafe {
            zgeqrf_(
                &mi,
                &ni,
                self.data.as_mut_ptr(),
                &mi,
                tau.as_mut_ptr(),
                query.as_mut_ptr(),
                &lwork_query,
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zgeqrf (workspace query)",
                info,
            });
        }
        let lwork = (query[0].re as usize).max(n);
        let lworki = as_lapack_dim(lwork)?;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork];
        unsafe {
            zgeqrf_(
                &mi,
                &ni,
                self.data.as_mut_ptr(),
                &mi,
                tau.as_mut_ptr(),
                work.as_mut_ptr(),
                &lworki,
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zgeqrf",
                info,
            });
        }
        let r_diag: Vec<Complex64> = (0..n).map(|j| self[(j, j)]).collect();
        unsafe {
            zungqr_(
                &mi,
                &ni,
                &ni,
                self.data.as_mut_ptr(),
                &mi,
                tau.as_ptr(),
                work.as_mut_ptr(),
                &lworki,
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zungqr",
                info,
            });
        }
        Ok(r_diag)
    }

    /// `alpha * self * self^H`, computed with the Hermitian rank-k update and
    /// mirrored to a full matrix.
    pub fn aat_hermitian(&self, alpha: f64) -> Result<CMatrix, LinalgError> {
        let n = self.rows;
        let k = self.cols;
        let ni = as_lapack_dim(n)?;
        let ki = as_lapack_dim(k)?;
        let mut c = CMatrix::zeros(n, n);
        let uplo = b'L' as c_char;
        let trans = b'N' as c_char;
        let beta = 0.0f64;
        unsafe {
            zherk_(
                &uplo,
                &trans,
                &ni,
                &ki,
                &alpha,
                self.data.as_ptr(),
                &ni,
                &beta,
                c.data.as_mut_ptr(),
                &ni,
            );
        }
        for j in 0..n {
            for i in 0..j {
                c[(i, j)] = c[(j, i)].conj();
            }
        }
        Ok(c)
    }
}

fn trans_dims(m: &CMatrix, t: u8) -> (usize, usize) {
    if t == b'N' {
        (m.rows, m.cols)
    } else {
        (m.cols, m.rows)
    }
}

fn gemm(a: &CMatrix, ta: u8, b: &CMatrix, tb: u8) -> Result<CMatrix, LinalgError> {
    let (m, ka) = trans_dims(a, ta);
    let (kb, n) = trans_dims(b, tb);
    if ka != kb {
        return Err(LinalgError::DimMismatch(format!(
            "product inner dimensions {ka} and {kb} differ"
        )));
    }
    let mi = as_lapack_dim(m)?;
    let ni = as_lapack_dim(n)?;
    let ki = as_lapack_dim(ka)?;
    let lda = as_lapack_dim(a.rows.max(1))?;
    let ldb = as_lapack_dim(b.rows.max(1))?;
    let ldc = as_lapack_dim(m.max(1))?;
    let mut c = CMatrix::zeros(m, n);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let ta = ta as c_char;
    let tb = tb as c_char;
    unsafe {
        zgemm_(
            &ta,
            &tb,
            &mi,
            &ni,
            &ki,
            &one,
            a.data.as_ptr(),
            &lda,
            b.data.as_ptr(),
            &ldb,
            &zero,
            c.data.as_mut_ptr(),
            &ldc,
        );
    }
    Ok(c)
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

/// Eigenvalues of a real symmetric matrix given in row-major order.
pub fn eigvalsh_real(matrix: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    if matrix.len() != n * n {
        return Err(LinalgError::DimMismatch(format!(
            "buffer of length {} cannot hold a {n}x{n} matrix",
            matrix.len()
        )));
    }
    let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(matrix[i * n + j], 0.0));
    m.eigvalsh()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigvalsh_two_by_two() {
        let m = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0, ), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)])
            .unwrap();
        let w = m.eigvalsh().unwrap();
        assert!((w[0] - 0.0).abs() < 1e-12);
        assert!((w[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs() {
        let m = CMatrix::from_fn(5, 5, |i, j| {
            let base = c(1.0 / (1.0 + i as f64 + j as f64), 0.0);
            if i < j {
                base + c(0.0, 0.1 * (j - i) as f64)
            } else if i > j {
                (base + c(0.0, 0.1 * (i - j) as f64)).conj()
            } else {
                base
            }
        });
        let (w, v) = m.eigh().unwrap();
        let mut rec = CMatrix::zeros(5, 5);
        for k in 0..5 {
            for i in 0..5 {
                for j in 0..5 {
                    rec[(i, j)] += v[(i, k)] * w[k] * v[(j, k)].conj();
                }
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                assert!((rec[(i, j)] - m[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qr_gives_unitary_columns() {
        let mut m = CMatrix::from_fn(6, 6, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0 - 1.0));
        m.orthonormalize_columns().unwrap();
        let p = m.adjoint().mul(&m).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn herk_matches_gemm() {
        let g = CMatrix::from_fn(4, 7, |i, j| c((i as f64 - j as f64) * 0.3, (i * j) as f64 * 0.1));
        let via_herk = g.aat_hermitian(0.5).unwrap();
        let mut via_gemm = g.mul_adjoint(&g).unwrap();
        via_gemm.scale(c(0.5, 0.0));
        for i in 0..4 {
            for j in 0..4 {
                assert!((via_herk[(i, j)] - via_gemm[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut m = CMatrix::identity(3);
        assert_eq!(m.hermiticity_defect(), 0.0);
        m[(0, 1)] = c(0.5, 0.25);
        assert!(m.hermiticity_defect() > 0.5);
    }
}
