//! Classical spectral toolbox: Hermitian matrices, an exact eigensolver,
//! norm bounds, condition numbers, filtered solves, and unitary matrix
//! exponentials.
//!
//! Everything downstream (phase estimation, solvers, estimators) treats
//! this module as ground truth, so the contracts here are deliberately
//! strict: Hermitian symmetry is validated on construction, the
//! eigensolver's ordering is fully deterministic, and near-singular
//! inversions fail loudly instead of returning garbage.

mod cmatrix;
mod jacobi;

pub use cmatrix::{
    inner, normalized, real_vec, vec_add, vec_max_abs_diff, vec_norm, vec_scale, vec_sub, CMatrix,
};
pub use jacobi::MAX_SWEEPS;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Largest matrix dimension the toolbox accepts. Keeps every operation
/// comfortably exact and fast; larger systems are out of scope by design.
pub const MAX_DIM: usize = 64;

/// Relative floor under which an eigenvalue counts as zero when computing
/// condition numbers.
pub const SINGULAR_CUTOFF: f64 = 1e-14;

/// Entry-wise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A validated Hermitian matrix.
///
/// Construction checks `a[i][j] == conj(a[j][i])` within
/// [`HERMITIAN_TOLERANCE`] and then stores the exact Hermitian part
/// `(A + A*)/2`, so the symmetry invariant holds to the last bit from then
/// on (the projection is exact in floating point: both members of a
/// conjugate pair are assembled from the same operands).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: mat.rows(),
                got: mat.cols(),
            });
        }
        let n = mat.rows();
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension { dim: n, max: MAX_DIM });
        }
        for i in 0..n {
            for j in i..n {
                let dev = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if dev > HERMITIAN_TOLERANCE {
                    return Err(Error::NotHermitian {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(Self::hermitian_part(&mat))
    }

    /// Exact Hermitian projection `(A + A*)/2` of an arbitrary square
    /// matrix. No tolerance check; useful when the input is Hermitian by
    /// construction up to round-off (Gram matrices, `F*F` products, ...).
    pub fn hermitian_part(mat: &CMatrix) -> Self {
        assert!(mat.is_square());
        let n = mat.rows();
        let sym = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(mat[(i, i)].re, 0.0)
            } else {
                (mat[(i, j)] + mat[(j, i)].conj()) * Complex64::new(0.5, 0.0)
            }
        });
        HermitianMatrix { mat: sym }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        let mat = CMatrix::from_fn(n, n, |i, j| rows[i][j]);
        HermitianMatrix::new(mat)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        let mat = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        HermitianMatrix::new(mat)
    }

    /// Diagonal matrix with the given real entries. Exact by construction,
    /// so no symmetry scan is needed — this matters for the large kernel
    /// matrices used in trace-estimation experiments.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::UnsupportedDimension { dim: 0, max: MAX_DIM });
        }
        let mat = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(HermitianMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Entry-wise scaling by a real factor; Hermitian symmetry survives.
    pub fn scaled(&self, factor: f64) -> HermitianMatrix {
        HermitianMatrix {
            mat: self.mat.scale(Complex64::new(factor, 0.0)),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.mat.mul_vec(v)
    }
}

impl HermitianMatrix {
    /// Diagonal matrices larger than [`MAX_DIM`] are allowed: they are
    /// trivially exact and only used for sampling-based estimators, never
    /// for the dense eigensolver.
    pub fn from_diagonal_unbounded(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::UnsupportedDimension { dim: 0, max: MAX_DIM });
        }
        let n = diag.len();
        let mat = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(HermitianMatrix { mat })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Ordering convention: eigenvalues descend by magnitude; exact magnitude
/// ties order by signed value descending; remaining ties keep the
/// pre-sort index order. Eigenvectors are the matching unitary columns,
/// re-orthonormalized in index order inside any degenerate block so the
/// output is deterministic even when the eigenspace basis is not unique.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        // First entry by the ordering convention.
        self.eigenvalues.first().map(|l| l.abs()).unwrap_or(0.0)
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// U diag(lambda) U*.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] = scaled[(i, j)] * Complex64::new(self.eigenvalues[j], 0.0);
            }
        }
        scaled.mul(&self.eigenvectors.adjoint())
    }

    /// max|lambda| / min|lambda|; errors when the matrix is numerically
    /// singular relative to its largest eigenvalue.
    pub fn condition_number(&self) -> Result<f64> {
        let max = self.max_abs_eigenvalue();
        let min = self.min_abs_eigenvalue();
        if max == 0.0 {
            return Err(Error::Singular { ratio: 0.0 });
        }
        let ratio = min / max;
        if ratio < SINGULAR_CUTOFF {
            return Err(Error::Singular { ratio });
        }
        Ok(max / min)
    }
}

/// Full eigendecomposition via cyclic Jacobi rotations.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let (raw_eig, raw_vec) = jacobi::eig_jacobi(a.matrix())?;

    // Deterministic ordering: |lambda| desc, then signed value desc, then
    // original index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw_eig[j]
            .abs()
            .partial_cmp(&raw_eig[i].abs())
            .unwrap()
            .then(raw_eig[j].partial_cmp(&raw_eig[i]).unwrap())
            .then(i.cmp(&j))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw_eig[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = raw_vec[(i, src)];
        }
    }

    orthonormalize_degenerate_blocks(&eigenvalues, &mut eigenvectors);

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Gram–Schmidt, in index order, over runs of (numerically) equal
/// eigenvalues. The Jacobi output is already unitary to round-off; this
/// pass pins down the basis inside each degenerate eigenspace so equal
/// inputs give bit-equal outputs.
fn orthonormalize_degenerate_blocks(eigenvalues: &[f64], vectors: &mut CMatrix) {
    let n = eigenvalues.len();
    if n == 0 {
        return;
    }
    let tol = 1e-12 * eigenvalues[0].abs().max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[start]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 {
            for j in start..end {
                let mut col = vectors.column(j);
                for k in start..j {
                    let prev = vectors.column(k);
                    let proj = inner(&prev, &col);
                    for i in 0..n {
                        col[i] -= proj * prev[i];
                    }
                }
                let norm = vec_norm(&col);
                for i in 0..n {
                    vectors[(i, j)] = col[i] / norm;
                }
            }
        }
        start = end;
    }
}

/// The four cheap upper bounds on the spectral radius of a Hermitian
/// matrix, each computable without an eigensolve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectralBounds {
    /// sqrt(Tr(A A*)), computed through the matrix product.
    pub trace_bound: f64,
    /// Max column sum of entry magnitudes (induced 1-norm).
    pub one_norm: f64,
    /// sqrt(sum |a_ij|^2), computed entry-wise.
    pub frobenius: f64,
    /// dim * max |a_ij|.
    pub max_entry_bound: f64,
}

/// Evaluate all four bounds.
///
/// `trace_bound` and `frobenius` are the same quantity reached by two
/// different routes (trace of A A* vs. direct entry sum); keeping both is
/// a deliberate cross-check, and they agree within 1e-12 relative.
pub fn spectral_bounds(a: &HermitianMatrix) -> SpectralBounds {
    let n = a.dim();
    let m = a.matrix();

    let product = m.mul(&m.adjoint());
    let mut trace = 0.0;
    for i in 0..n {
        trace += product[(i, i)].re;
    }
    let trace_bound = trace.max(0.0).sqrt();

    let mut one_norm: f64 = 0.0;
    for j in 0..n {
        let col_sum: f64 = (0..n).map(|i| m[(i, j)].norm()).sum();
        one_norm = one_norm.max(col_sum);
    }

    SpectralBounds {
        trace_bound,
        one_norm,
        frobenius: m.frobenius_norm(),
        max_entry_bound: n as f64 * m.max_abs(),
    }
}

/// max|lambda| / min|lambda| of a Hermitian matrix.
pub fn condition_number(a: &HermitianMatrix) -> Result<f64> {
    eig_hermitian(a)?.condition_number()
}

/// Solve `A x = b` keeping only spectral components with |lambda| >= mu.
///
/// The filtered components contribute nothing (their inverse is taken as
/// zero). If the filter removes everything, that is reported as an error
/// rather than silently returning the zero vector.
pub fn thresholded_solve(a: &HermitianMatrix, b: &[Complex64], mu: f64) -> Result<Vec<Complex64>> {
    if mu < 0.0 {
        return Err(Error::precondition("threshold mu must be nonnegative"));
    }
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }
    let dec = eig_hermitian(a)?;
    let n = a.dim();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut kept = 0usize;
    for j in 0..n {
        let lambda = dec.eigenvalues[j];
        if lambda.abs() < mu {
            continue;
        }
        if lambda == 0.0 {
            // A kept exact-zero eigenvalue has no inverse.
            return Err(Error::Singular { ratio: 0.0 });
        }
        kept += 1;
        let u = dec.eigenvector(j);
        let beta = inner(&u, b);
        let coeff = beta / Complex64::new(lambda, 0.0);
        for i in 0..n {
            x[i] += coeff * u[i];
        }
    }
    if kept == 0 {
        return Err(Error::AllModesFiltered { mu });
    }
    Ok(x)
}

/// exp(i A t) = U diag(e^{i lambda t}) U*.
pub fn matrix_exponential_unitary(a: &HermitianMatrix, t: f64) -> Result<CMatrix> {
    let dec = eig_hermitian(a)?;
    Ok(expm_from_decomposition(&dec, t))
}

/// Same as [`matrix_exponential_unitary`] but reusing an existing
/// decomposition (phase-estimation pipelines already have one on hand).
pub fn expm_from_decomposition(dec: &SpectralDecomposition, t: f64) -> CMatrix {
    let n = dec.dim();
    let mut scaled = dec.eigenvectors.clone();
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, dec.eigenvalues[j] * t);
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)] * phase;
        }
    }
    scaled.mul(&dec.eigenvectors.adjoint())
}
