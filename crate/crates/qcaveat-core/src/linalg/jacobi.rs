//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Classic two-sided Jacobi with complex Givens rotations: each rotation
//! annihilates one off-diagonal pair, sweeps run over all (p, q) in cyclic
//! order, and convergence is quadratic once the off-diagonal mass is small.
//! Plenty fast and very robust at the dimensions this crate targets.

use super::cmatrix::CMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Hard cap on full sweeps before the solver gives up. Quadratic
/// convergence means well-conditioned inputs finish in < 10 sweeps even at
/// dimension 64; hitting the cap signals something genuinely pathological.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass of a square matrix.
fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalize a Hermitian matrix in place.
///
/// Returns the (unsorted) real eigenvalue estimates and the accumulated
/// unitary whose columns are the matching eigenvectors. The caller is
/// responsible for ordering conventions.
pub fn eig_jacobi(input: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    assert!(input.is_square());
    let n = input.rows();
    let mut a = input.clone();
    let mut v = CMatrix::identity(n);

    if n == 1 {
        return Ok((vec![a[(0, 0)].re], v));
    }

    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tol = 1e-14 * scale;
    // Rotations on entries this small only churn round-off.
    let skip = 1e-300_f64.max(f64::EPSILON * scale * 1e-3);

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence {
                dim: n,
                residual: off_diagonal_norm(&a) / scale,
                sweeps,
            });
        }
        sweeps += 1;

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= skip {
                    continue;
                }
                // Phase of the off-diagonal entry and the real rotation
                // angle that annihilates it.
                let phase = apq / mag; // e^{i arg(apq)}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                // Smaller-magnitude root of t^2 - 2 theta t - 1 = 0, the
                // annihilation condition for the rotation convention used
                // in the updates below.
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sigma = phase * s; // complex sine

                // A <- J* A J with J embedding [[c, -sigma],[conj(sigma), c]]
                // at (p, q). Columns first, then rows.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * sigma.conj();
                    a[(i, q)] = aiq * c - aip * sigma;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * sigma;
                    a[(q, j)] = aqj * c - apj * sigma.conj();
                }
                // Keep the invariants exact where round-off would drift.
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * sigma.conj();
                    v[(i, q)] = viq * c - vip * sigma;
                }
            }
        }
    }

    let eigenvalues = (0..n).map(|i| a[(i, i)].re).collect();
    Ok((eigenvalues, v))
}
