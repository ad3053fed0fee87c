//! Random problem generators used by experiments and tests.
//!
//! Every generator takes the random stream as an explicit argument so
//! callers control seeding; nothing here touches global state.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{inner, vec_norm, CMatrix, HermitianMatrix};

/// Dense Hermitian matrix with entries of order one: the Hermitian part of
/// a matrix with uniform entries in `[-1, 1] + i[-1, 1]`.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let raw = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    });
    HermitianMatrix::hermitian_part(&raw)
}

/// Haar-ish random unitary: modified Gram–Schmidt applied to a random
/// complex matrix (almost surely full rank).
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut col = random_unit_vector(dim, rng);
        // Two orthogonalization passes keep the result unitary to
        // round-off even when a draw lands close to the current span.
        for _ in 0..2 {
            for prev in &cols {
                let proj = inner(prev, &col);
                for i in 0..dim {
                    col[i] -= proj * prev[i];
                }
            }
        }
        let norm = vec_norm(&col);
        assert!(norm > 1e-8, "random draw degenerated; try another seed");
        for entry in &mut col {
            *entry /= norm;
        }
        cols.push(col);
    }
    CMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Hermitian matrix with a prescribed real spectrum: `U diag(spectrum) U*`
/// for a random unitary `U`. Returns the matrix together with the basis,
/// whose columns are the eigenvectors matching `spectrum` in order.
pub fn hermitian_with_spectrum<R: Rng>(
    spectrum: &[f64],
    rng: &mut R,
) -> (HermitianMatrix, CMatrix) {
    let dim = spectrum.len();
    let u = random_unitary(dim, rng);
    let mut scaled = u.clone();
    for j in 0..dim {
        for i in 0..dim {
            scaled[(i, j)] = scaled[(i, j)] * Complex64::new(spectrum[j], 0.0);
        }
    }
    let a = scaled.mul(&u.adjoint());
    (HermitianMatrix::hermitian_part(&a), u)
}

/// Uniformly random complex unit vector.
pub fn random_unit_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let norm = vec_norm(&v);
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Random real spectrum with magnitudes in `[min_abs, 1]`, rescaled so the
/// largest magnitude is exactly 1. With `signed`, each eigenvalue gets an
/// independent random sign.
pub fn random_spectrum<R: Rng>(dim: usize, min_abs: f64, signed: bool, rng: &mut R) -> Vec<f64> {
    assert!(dim > 0 && min_abs > 0.0 && min_abs < 1.0);
    let mut mags: Vec<f64> = (0..dim)
        .map(|_| min_abs + (1.0 - min_abs) * rng.gen::<f64>())
        .collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    for m in &mut mags {
        *m /= max;
    }
    mags.into_iter()
        .map(|m| if signed && rng.gen::<bool>() { -m } else { m })
        .collect()
}

/// Spectrum whose eigenvalues sit exactly on the phase-readout grid for a
/// `clock_qubits`-bit register at evolution time `t`: each eigenvalue is
/// the decoded value of a distinct nonzero grid index, so phase readout
/// is exact for these matrices.
pub fn on_grid_spectrum<R: Rng>(
    dim: usize,
    clock_qubits: u32,
    t: f64,
    rng: &mut R,
) -> Vec<f64> {
    let n = 1usize << clock_qubits;
    assert!(dim < n, "need more grid points than eigenvalues");
    assert!(t > 0.0);
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    while chosen.len() < dim {
        let y = rng.gen_range(1..n);
        if !chosen.contains(&y) {
            chosen.push(y);
        }
    }
    chosen
        .into_iter()
        .map(|y| {
            let frac = y as f64 / n as f64;
            if 2.0 * frac <= 1.0 {
                2.0 * std::f64::consts::PI * frac / t
            } else {
                -2.0 * std::f64::consts::PI * (1.0 - frac) / t
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;
    use crate::rng::rng_from_seed;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rng_from_seed(1);
        for dim in [1usize, 2, 5, 9] {
            let u = random_unitary(dim, &mut rng);
            assert!(u.unitarity_deviation() < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn prescribed_spectrum_is_recovered() {
        let mut rng = rng_from_seed(2);
        let spectrum = [0.9, -0.4, 0.2];
        let (a, _) = hermitian_with_spectrum(&spectrum, &mut rng);
        let dec = eig_hermitian(&a).unwrap();
        assert!((dec.eigenvalues[0] - 0.9).abs() < 1e-10);
        assert!((dec.eigenvalues[1] + 0.4).abs() < 1e-10);
        assert!((dec.eigenvalues[2] - 0.2).abs() < 1e-10);
    }

    #[test]
    fn basis_columns_are_eigenvectors() {
        let mut rng = rng_from_seed(3);
        let spectrum = [0.8, 0.3];
        let (a, u) = hermitian_with_spectrum(&spectrum, &mut rng);
        for (j, lambda) in spectrum.iter().enumerate() {
            let col = u.column(j);
            let av = a.mul_vec(&col);
            for i in 0..2 {
                assert!((av[i] - col[i] * *lambda).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn spectrum_is_max_normalized() {
        let mut rng = rng_from_seed(4);
        let spec = random_spectrum(6, 0.3, true, &mut rng);
        let max = spec.iter().map(|l| l.abs()).fold(0.0, f64::max);
        assert_eq!(max, 1.0);
        assert!(spec.iter().all(|l| l.abs() >= 0.3 - 1e-12));
    }

    #[test]
    fn grid_spectrum_lands_on_grid() {
        let mut rng = rng_from_seed(5);
        let t = 0.7;
        let k = 5u32;
        let n = 1usize << k;
        let spec = on_grid_spectrum(4, k, t, &mut rng);
        for lambda in spec {
            let g = lambda * t * n as f64 / (2.0 * std::f64::consts::PI);
            assert!((g - g.round()).abs() < 1e-9, "off-grid eigenvalue {lambda}");
            assert!(g.round() != 0.0);
        }
    }

    #[test]
    fn unit_vectors_are_normalized() {
        let mut rng = rng_from_seed(6);
        let v = random_unit_vector(7, &mut rng);
        assert!((vec_norm(&v) - 1.0).abs() < 1e-12);
    }
}
