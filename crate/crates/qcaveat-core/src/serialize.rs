//! Stable JSON schemas for the crate's data: complex vectors and
//! matrices as parallel `re`/`im` arrays, datasets as vector lists,
//! states with their register layout in declaration order, and solver
//! results flattened to plain numbers. Reports written through this
//! module can be parsed by outside tooling without knowing any internal
//! type, and identical inputs always serialize to identical bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hhl::{HhlMode, HhlResult};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::statevector::QuantumState;

/// Complex vector split into parallel real arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_slice(v: &[Complex64]) -> Self {
        VectorJson {
            dim: v.len(),
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    /// Rebuild the complex vector, validating the declared length.
    pub fn to_vec(&self) -> Result<Vec<Complex64>> {
        if self.re.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: self.re.len(),
            });
        }
        if self.im.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: self.im.len(),
            });
        }
        Ok(self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect())
    }
}

/// Square complex matrix as row-major `re`/`im` grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    /// Serialize a square matrix; non-square input is a caller bug.
    pub fn from_cmatrix(m: &CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                got: m.cols(),
            });
        }
        let n = m.rows();
        let grid = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Ok(MatrixJson {
            dim: n,
            re: grid(|z| z.re),
            im: grid(|z| z.im),
        })
    }

    pub fn from_hermitian(m: &HermitianMatrix) -> Self {
        Self::from_cmatrix(m.matrix()).expect("stored matrix is square")
    }

    pub fn to_cmatrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let check = |grid: &Vec<Vec<f64>>| -> Result<()> {
            if grid.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: grid.len(),
                });
            }
            for row in grid {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: row.len(),
                    });
                }
            }
            Ok(())
        };
        check(&self.re)?;
        check(&self.im)?;
        Ok(CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }

    /// Rebuild and validate as Hermitian.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_cmatrix()?)
    }
}

/// Collection of same-dimension vectors with optional labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetJson {
    pub vectors: Vec<VectorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<f64>>,
}

/// One register of a state layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterJson {
    pub name: String,
    pub qubits: usize,
}

/// Snapshot of a simulator state: layout (most-significant register
/// first, matching the simulator's bit order) plus full amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateJson {
    pub registers: Vec<RegisterJson>,
    pub amplitudes: VectorJson,
}

impl StateJson {
    pub fn from_state(state: &QuantumState) -> Self {
        StateJson {
            registers: state
                .layout()
                .entries()
                .iter()
                .map(|(name, qubits)| RegisterJson {
                    name: name.clone(),
                    qubits: *qubits,
                })
                .collect(),
            amplitudes: VectorJson::from_slice(state.amplitudes()),
        }
    }
}

/// Flattened solver output: everything a report needs, nothing tied to
/// in-memory types.
#[derive(Debug, Clone, Serialize)]
pub struct HhlResultJson {
    pub solution_state: StateJson,
    pub decoded_solution: VectorJson,
    pub success_probability: f64,
    pub success_probability_exact: f64,
    pub rotation_constant: f64,
    pub kept_eigenvalue_count: usize,
    pub discarded_weight: f64,
    pub z_tilde: f64,
    pub b_norm: f64,
    pub modes: Vec<HhlMode>,
}

impl HhlResultJson {
    pub fn from_result(result: &HhlResult) -> Self {
        HhlResultJson {
            solution_state: StateJson::from_state(&result.solution_state),
            decoded_solution: VectorJson::from_slice(&result.decoded_solution),
            success_probability: result.success_probability,
            success_probability_exact: result.success_probability_exact,
            rotation_constant: result.rotation_constant,
            kept_eigenvalue_count: result.kept_eigenvalue_count,
            discarded_weight: result.discarded_weight,
            z_tilde: result.z_tilde,
            b_norm: result.b_norm,
            modes: result.modes.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline; deterministic for identical
/// values.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
