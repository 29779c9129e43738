//! Dense complex-matrix kernels: pseudoinverse, PSD square root, Hermitian
//! eigenvalue bounds, spectral radius.
//!
//! Everything downstream works with [`CMatrix`], a dense double-precision
//! complex matrix. The decompositions are backed by `nalgebra`; the
//! functions here fix the rank thresholds and symmetrization conventions
//! that the rest of the pipeline relies on.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the universal numeric carrier of the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Stability margin: a state matrix counts as stable when its spectral
/// radius is below `1 - EPS_STAB`.
pub const EPS_STAB: f64 = 1e-9;

/// True when every entry is finite (no NaN or infinity).
pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// Frobenius distance from `m` to its adjoint.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).norm()
}

/// Hermitian part `(M + M*)/2`.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of the Hermitian part of `m`.
///
/// Returns eigenvalues in ascending order with matching eigenvector columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
///
/// The empty matrix has no eigenvalues; its minimum is `+inf`, which makes
/// zero-state positivity checks pass vacuously.
pub fn min_hermitian_eig(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    let (values, _) = hermitian_eigen(m);
    values[0]
}

/// Largest absolute eigenvalue of a square complex matrix.
///
/// The eigenvalues are obtained from the real Schur form of the standard
/// realification `[[Re A, -Im A], [Im A, Re A]]`, whose spectrum is the
/// spectrum of `A` together with its conjugates.
pub fn spectral_radius(a: &CMatrix) -> f64 {
    assert_eq!(a.nrows(), a.ncols(), "spectral_radius requires a square matrix");
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut re = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            re[(i, j)] = x.re;
            re[(i, j + n)] = -x.im;
            re[(i + n, j)] = x.im;
            re[(i + n, j + n)] = x.re;
        }
    }
    re.complex_eigenvalues()
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max)
}

/// Moore-Penrose pseudoinverse with an explicit singular-value cutoff.
///
/// Singular values at or below the threshold are treated as exactly zero.
/// `tol = 0` selects the default relative threshold
/// `sigma_max * max(rows, cols) * eps`.
pub fn pinv(m: &CMatrix, tol: f64) -> CMatrix {
    assert!(tol >= 0.0, "pinv threshold must be nonnegative");
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd with u requested");
    let v_t = svd.v_t.expect("svd with v_t requested");
    let sigma_max = svd.singular_values.max();
    let threshold = if tol > 0.0 {
        tol
    } else {
        sigma_max * rows.max(cols) as f64 * f64::EPSILON
    };
    let k = svd.singular_values.len();
    let mut inv_sigma = CMatrix::zeros(k, k);
    for i in 0..k {
        let s = svd.singular_values[i];
        if s > threshold {
            inv_sigma[(i, i)] = Complex64::new(1.0 / s, 0.0);
        }
    }
    v_t.adjoint() * inv_sigma * u.adjoint()
}

/// Unique Hermitian PSD square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-tol, 0]` are clamped to zero; an eigenvalue below
/// `-tol` means the input is not PSD. The Hermitian precondition is checked
/// against `tol * (1 + ||M||_F)`.
pub fn psd_sqrt(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    assert!(tol >= 0.0, "psd_sqrt tolerance must be nonnegative");
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch { context: "psd_sqrt" });
    }
    if m.nrows() == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let defect = hermitian_defect(m);
    if defect > tol * (1.0 + m.norm()) {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = hermitian_eigen(m);
    if values[0] < -tol {
        return Err(Error::NotPsd { min_eig: values[0] });
    }
    let sqrt_diag = CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            Complex64::new(values[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(symmetrize(&(&vectors * sqrt_diag * vectors.adjoint())))
}

/// Cholesky factorization `M = L L*` of a Hermitian positive definite
/// matrix, with a strict positivity check on every pivot. (The generic
/// complex Cholesky in the backend takes square roots of arbitrary complex
/// pivots and therefore never detects indefiniteness.)
pub struct HpdCholesky {
    l: CMatrix,
}

impl HpdCholesky {
    /// Returns `None` when a pivot is non-positive, i.e. the matrix is not
    /// positive definite.
    pub fn new(m: &CMatrix) -> Option<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return None;
        }
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut pivot = m[(j, j)].re;
            for k in 0..j {
                pivot -= l[(j, k)].norm_sqr();
            }
            if !pivot.is_finite() || pivot <= 0.0 {
                return None;
            }
            let diag = pivot.sqrt();
            l[(j, j)] = Complex64::new(diag, 0.0);
            for i in (j + 1)..n {
                let mut sum = m[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = sum / diag;
            }
        }
        Some(HpdCholesky { l })
    }

    /// Solves `M X = B` by forward and back substitution.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.l.nrows();
        let mut x = b.clone();
        for col in 0..x.ncols() {
            // L y = b
            for i in 0..n {
                let mut sum = x[(i, col)];
                for k in 0..i {
                    sum -= self.l[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = sum / self.l[(i, i)];
            }
            // L* x = y
            for i in (0..n).rev() {
                let mut sum = x[(i, col)];
                for k in (i + 1)..n {
                    sum -= self.l[(k, i)].conj() * x[(k, col)];
                }
                x[(i, col)] = sum / self.l[(i, i)];
            }
        }
        x
    }
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
///
/// Returns `None` when the matrix is not (numerically) positive definite.
pub fn hpd_inverse(m: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(CMatrix::zeros(0, 0));
    }
    let n = m.nrows();
    HpdCholesky::new(m).map(|chol| symmetrize(&chol.solve(&CMatrix::identity(n, n))))
}

/// Solves `M X = B` for Hermitian positive definite `M` via Cholesky.
pub fn hpd_solve(m: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(CMatrix::zeros(0, b.ncols()));
    }
    HpdCholesky::new(m).map(|chol| chol.solve(b))
}

/// Rank of a Hermitian PSD matrix: eigenvalues below `tol * lambda_max`
/// count as zero.
pub fn psd_rank(m: &CMatrix, tol: f64) -> usize {
    if m.nrows() == 0 {
        return 0;
    }
    let (values, _) = hermitian_eigen(m);
    let lambda_max = values.last().copied().unwrap_or(0.0).max(0.0);
    if lambda_max == 0.0 {
        return 0;
    }
    values.iter().filter(|&&l| l > tol * lambda_max).count()
}

/// Horizontal concatenation. All blocks must share the row count.
pub fn hcat(blocks: &[&CMatrix]) -> CMatrix {
    assert!(!blocks.is_empty(), "hcat of no blocks");
    let rows = blocks[0].nrows();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut offset = 0;
    for block in blocks {
        assert_eq!(block.nrows(), rows, "hcat row mismatch");
        out.view_mut((0, offset), (rows, block.ncols())).copy_from(*block);
        offset += block.ncols();
    }
    out
}

/// Vertical concatenation. All blocks must share the column count.
pub fn vcat(blocks: &[&CMatrix]) -> CMatrix {
    assert!(!blocks.is_empty(), "vcat of no blocks");
    let cols = blocks[0].ncols();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut offset = 0;
    for block in blocks {
        assert_eq!(block.ncols(), cols, "vcat column mismatch");
        out.view_mut((offset, 0), (block.nrows(), cols)).copy_from(*block);
        offset += block.nrows();
    }
    out
}
