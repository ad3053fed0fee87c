//! Application-layer estimators built on the solver and on shot-based
//! sampling: swap-test overlaps, regression prediction, cluster-distance
//! classification, kernel-trace estimation, and least-squares SVM system
//! assembly.
//!
//! The shared theme is norm amplification: each estimator measures a
//! well-conditioned normalized quantity (an overlap, a post-selection
//! probability, a normalized trace) and the application then multiplies
//! it by a norm factor (|c||x|, Z-squared, the matrix dimension). The
//! records returned here carry the exact value, the shot estimate, and
//! the amplification factor side by side so that error growth through
//! that last multiplication is directly visible.
//!
//! All sampling is deterministic per seed: independent streams are
//! derived by salting the caller's seed, so identical calls reproduce
//! identical records.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hhl::{hhl_ideal, HhlConfig, HhlResult};
use crate::linalg::{
    inner, normalized, real_vec, thresholded_solve, vec_norm, vec_sub, CMatrix, HermitianMatrix,
};
use crate::rng::{binomial_fraction, mix_seed, rng_from_seed};
use crate::serialize::{DatasetJson, VectorJson};
use rand::Rng;

/// Tolerance for the unit-norm preconditions of overlap estimators.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// Small-angle budget for the classification preparation: `t` times the
/// largest data norm must stay at or below this.
pub const SMALL_ANGLE_LIMIT: f64 = 0.1;

// Stream salts keeping each estimator's draws independent of the others
// even when the caller reuses one seed across them.
const SWAP_STREAM_SALT: u64 = 0x7377_6170_7465_7374;
const REAL_PART_SALT: u64 = 0x7265_616c_7061_7274;
const IMAG_PART_SALT: u64 = 0x696d_6167_7061_7274;
const PREP_PROB_SALT: u64 = 0x7072_6570_7072_6f62;
const DIST_PROB_SALT: u64 = 0x6469_7374_7072_6f62;
const TRACE_DIAG_SALT: u64 = 0x7472_6469_6167_6978;

/// 95% two-sided Hoeffding half-width for a mean of `shots` draws from a
/// distribution whose support spans `range`.
pub fn hoeffding_halfwidth(shots: u64, range: f64) -> f64 {
    ((2.0 / 0.05f64).ln() / (2.0 * shots as f64)).sqrt() * range
}

/// One shot-based estimate with its exact counterpart and confidence
/// accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEstimate {
    /// Final estimate, clamped to the quantity's physical range.
    pub value: f64,
    /// Infinite-shot value of the same quantity.
    pub exact: f64,
    /// Estimate before clamping (kept so bias checks can average it).
    pub raw_value: f64,
    pub shots: u64,
    /// 95% Hoeffding half-width scaled by the estimator's range.
    pub confidence_halfwidth: f64,
}

fn require_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::precondition("shot count must be at least 1"));
    }
    Ok(())
}

fn require_unit(v: &[Complex64]) -> Result<()> {
    let norm = vec_norm(v);
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotNormalized {
            norm,
            tolerance: UNIT_TOLERANCE,
        });
    }
    Ok(())
}

/// Simulated swap test between two unit states: acceptance probability
/// `p = 1/2 + |<a|b>|^2 / 2`, sampled `shots` times; the returned value
/// is `2 p-hat - 1` clamped to `[0, 1]`, an estimate of `|<a|b>|^2`.
pub fn swap_test(a: &[Complex64], b: &[Complex64], shots: u64, seed: u64) -> Result<ShotEstimate> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    require_shots(shots)?;
    require_unit(a)?;
    require_unit(b)?;

    let overlap_sq = inner(a, b).norm_sqr().min(1.0);
    let p = 0.5 + 0.5 * overlap_sq;
    let p_hat = binomial_fraction(mix_seed(SWAP_STREAM_SALT, seed), shots, p);
    let raw = 2.0 * p_hat - 1.0;
    Ok(ShotEstimate {
        value: raw.clamp(0.0, 1.0),
        exact: overlap_sq,
        raw_value: raw,
        shots,
        // The estimator 2 p-hat - 1 ranges over [-1, 1]: range 2.
        confidence_halfwidth: hoeffding_halfwidth(shots, 2.0),
    })
}

/// Ancilla-interference estimate of one quadrature of an overlap: the
/// interference circuit accepts with probability `(1 + q)/2` where `q`
/// is the real (or, with a quarter-wave phase inserted, the imaginary)
/// part of the overlap. Returns `2 p-hat - 1` clamped to `[-1, 1]`.
fn quadrature_estimate(component: f64, shots: u64, seed: u64) -> f64 {
    let p0 = 0.5 * (1.0 + component);
    let p_hat = binomial_fraction(seed, shots, p0);
    (2.0 * p_hat - 1.0).clamp(-1.0, 1.0)
}

// ---------------------------------------------------------------------------
// Datasets.
// ---------------------------------------------------------------------------

/// A cluster of same-dimension complex vectors with optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    vectors: Vec<Vec<Complex64>>,
    labels: Option<Vec<f64>>,
    dim: usize,
}

impl Dataset {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::precondition("dataset needs at least one vector"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::precondition("dataset vectors must be nonempty"));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(Dataset {
            vectors,
            labels: None,
            dim,
        })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        Dataset::new(rows.iter().map(|r| real_vec(r)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vectors.len(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Parse comma-separated rows of real numbers, one vector per line.
    /// Blank lines and full-line `#` comments are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let row = trimmed
                .split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    tok.parse::<f64>().map_err(|e| {
                        Error::Parse(format!("line {}: bad number {tok:?}: {e}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Dataset::from_real(&rows)
    }

    /// Parse the JSON dataset schema (vectors as `re`/`im` arrays, labels
    /// optional).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: DatasetJson = crate::serialize::from_json_str(text)?;
        let vectors = json
            .vectors
            .iter()
            .map(VectorJson::to_vec)
            .collect::<Result<Vec<_>>>()?;
        let data = Dataset::new(vectors)?;
        match json.labels {
            Some(labels) => data.with_labels(labels),
            None => Ok(data),
        }
    }

    pub fn to_json(&self) -> DatasetJson {
        DatasetJson {
            vectors: self.vectors.iter().map(|v| VectorJson::from_slice(v)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one vector
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, j: usize) -> &[Complex64] {
        &self.vectors[j]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| vec_norm(v)).collect()
    }

    /// Arithmetic mean of the vectors.
    pub fn mean(&self) -> Vec<Complex64> {
        let m = self.vectors.len() as f64;
        (0..self.dim)
            .map(|i| self.vectors.iter().map(|v| v[i]).sum::<Complex64>() / m)
            .collect()
    }

    /// Gram matrix `K[i][j] = <x_i|x_j>`; exactly Hermitian.
    pub fn gram(&self) -> CMatrix {
        let m = self.vectors.len();
        CMatrix::from_fn(m, m, |i, j| inner(&self.vectors[i], &self.vectors[j]))
    }
}

// ---------------------------------------------------------------------------
// Regression prediction.
// ---------------------------------------------------------------------------

/// A predicted value `c . x` with its full error breakdown: the solver's
/// state-level error next to the norm-amplified prediction error.
#[derive(Debug, Clone)]
pub struct PredictionRecord {
    /// Shot-based estimate of `c . x`: magnitude from the swap test,
    /// phase from the two quadrature interference estimates, scaled by
    /// `|c| |x-tilde|`.
    pub prediction: Complex64,
    /// Infinite-shot prediction read directly off the solver state.
    pub prediction_from_state: Complex64,
    /// True `c . x` from the exact classical solve.
    pub prediction_exact: Complex64,
    /// `|prediction - prediction_exact|`.
    pub prediction_error: f64,
    /// Distance between the normalized solver solution and the
    /// normalized true solution; small state error does not imply small
    /// prediction error once multiplied by the norms.
    pub state_error: f64,
    /// The norm factor `|c| |x-tilde|` multiplying every overlap error.
    pub amplification: f64,
    pub c_norm: f64,
    pub x_norm_estimate: f64,
    pub x_norm_exact: f64,
    /// Exact overlap of the unit directions `<c-hat|x-tilde-hat>`.
    pub overlap_exact: Complex64,
    /// Overlap assembled from the shot estimates.
    pub overlap_estimate: Complex64,
    /// The swap-test leg of the overlap estimate.
    pub swap: ShotEstimate,
    pub shots: u64,
    /// Full solver output for downstream error ledgers.
    pub hhl: HhlResult,
}

/// Predict `c . x` for the least-squares system `F* F x = F* b`, solving
/// with the spectral solver model and reading the overlap out through
/// shot-based estimators.
///
/// The record reports the state-level solution error and the
/// `|c||x|`-amplified prediction error side by side: a good normalized
/// solution state only yields a good prediction after multiplying by
/// norms that also multiply every error.
pub fn regression_predict(
    f: &CMatrix,
    b: &[f64],
    c: &[Complex64],
    config: &HhlConfig,
    shots: u64,
    seed: u64,
) -> Result<PredictionRecord> {
    if f.rows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: f.rows(),
            got: b.len(),
        });
    }
    if f.cols() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: f.cols(),
            got: c.len(),
        });
    }
    require_shots(shots)?;
    let c_norm = vec_norm(c);
    if c_norm == 0.0 {
        return Err(Error::ZeroState);
    }

    // Normal equations: F* F is exactly Hermitian, so construction
    // cannot trip the symmetry check.
    let adjoint = f.adjoint();
    let normal = HermitianMatrix::new(adjoint.mul(f))?;
    let rhs = adjoint.mul_vec(&real_vec(b));

    let hhl = hhl_ideal(&normal, &rhs, config)?;
    let x_true = thresholded_solve(&normal, &rhs, 0.0)?;

    let x_tilde = &hhl.decoded_solution;
    let x_norm_estimate = vec_norm(x_tilde);
    let x_norm_exact = vec_norm(&x_true);
    let (Some(x_unit), Some(x_true_unit), Some(c_unit)) =
        (normalized(x_tilde), normalized(&x_true), normalized(c))
    else {
        return Err(Error::ZeroState);
    };

    let overlap_exact = inner(&c_unit, &x_unit);
    let swap = swap_test(&c_unit, &x_unit, shots, seed)?;
    let re_hat = quadrature_estimate(overlap_exact.re, shots, mix_seed(REAL_PART_SALT, seed));
    let im_hat = quadrature_estimate(overlap_exact.im, shots, mix_seed(IMAG_PART_SALT, seed));
    let overlap_estimate = Complex64::from_polar(swap.value.sqrt(), im_hat.atan2(re_hat));

    let amplification = c_norm * x_norm_estimate;
    let prediction = overlap_estimate * amplification;
    let prediction_from_state = inner(c, x_tilde);
    let prediction_exact = inner(c, &x_true);

    let state_error = vec_norm(&vec_sub(&x_true_unit, &x_unit));

    Ok(PredictionRecord {
        prediction,
        prediction_from_state,
        prediction_exact,
        prediction_error: (prediction - prediction_exact).norm(),
        state_error,
        amplification,
        c_norm,
        x_norm_estimate,
        x_norm_exact,
        overlap_exact,
        overlap_estimate,
        swap,
        shots,
        hhl,
    })
}

// ---------------------------------------------------------------------------
// Cluster-distance classification.
// ---------------------------------------------------------------------------

/// Unit state encoding the data norms with a sign contrast: amplitudes
/// proportional to `(|u|, -|v_1|/sqrt(M), ..., -|v_M|/sqrt(M))`, with
/// normalization `Z = |u|^2 + (1/M) sum |v_j|^2`. Returns the state and
/// `Z`.
pub fn contrast_state(u: &[Complex64], cluster: &Dataset) -> Result<(Vec<f64>, f64)> {
    if u.len() != cluster.dim() {
        return Err(Error::DimensionMismatch {
            expected: cluster.dim(),
            got: u.len(),
        });
    }
    let m = cluster.len() as f64;
    let u_norm = vec_norm(u);
    let norms = cluster.norms();
    let z = u_norm * u_norm + norms.iter().map(|n| n * n).sum::<f64>() / m;
    if z == 0.0 {
        return Err(Error::precondition(
            "query and cluster are all zero vectors; the contrast state is undefined",
        ));
    }
    let scale = z.sqrt();
    let mut amps = Vec::with_capacity(cluster.len() + 1);
    amps.push(u_norm / scale);
    for n in &norms {
        amps.push(-n / (m.sqrt() * scale));
    }
    Ok((amps, z))
}

/// Everything measured and derived in one distance estimation.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRecord {
    /// Cluster size M.
    pub m: usize,
    /// Preparation angle parameter.
    pub t: f64,
    pub shots: u64,
    /// Norm energy `Z = |u|^2 + (1/M) sum |v_j|^2`, labeled `z_cls` to
    /// keep it apart from the solver ledger's solution norm `Z`.
    pub z_cls_exact: f64,
    /// `Z` recovered from the sampled preparation probability,
    /// `2 p-one-hat / t^2`.
    pub z_cls_estimate: f64,
    pub z_confidence_halfwidth: f64,
    /// Ancilla-one preparation probability: exact value
    /// `(sin^2(|u| t) + (1/M) sum sin^2(|v_j| t)) / 2` with its shot
    /// estimate.
    pub p_one: ShotEstimate,
    /// First-order approximation `Z t^2` of the same probability,
    /// reported alongside the exact value (they differ by a factor
    /// approaching 2 as t shrinks; both are carried so the gap is
    /// visible rather than silently resolved).
    pub p_one_approx: f64,
    /// Post-selection quantity `P = |u - mean|^2 / (2 Z^2)` with its
    /// shot estimate.
    pub p: ShotEstimate,
    /// Acceptance probability of projecting onto the contrast state,
    /// `|u - mean|^2 / (2 Z)`; the sampled `P` above is this projection
    /// read through the `1/Z` rescaling convention.
    pub p_born_exact: f64,
    /// Distance between the small-angle prepared state and the ideal
    /// contrast state (the preparation's truncation bias, order `t^2`).
    pub preparation_bias: f64,
    /// True squared distance `|u - (1/M) sum v_j|^2`.
    pub distance_exact: f64,
    /// Assembled estimate `2 P-hat Z-hat^2`.
    pub distance_estimate: f64,
    /// `|distance_estimate - distance_exact|`.
    pub distance_error: f64,
    /// Error contribution of the `P` estimate alone, amplified by the
    /// exact `Z^2`: `2 Z^2 |P-hat - P|`. This is the amplification that
    /// inflates the sample complexity by `Z^2`.
    pub distance_error_from_p: f64,
    /// Error contribution of the `Z` estimate alone:
    /// `2 P |Z-hat^2 - Z^2|`.
    pub distance_error_from_z: f64,
}

/// Estimate the squared distance from `u` to the mean of the cluster by
/// the post-selection construction: prepare the contrast state with a
/// small-angle rotation (success probability about `Z t^2 / 2`, sampled),
/// project onto it (probability `P`, sampled), and rescale the two
/// estimates into `2 P-hat Z-hat^2`.
pub fn classification_distance(
    u: &[Complex64],
    cluster: &Dataset,
    t: f64,
    shots: u64,
    seed: u64,
) -> Result<ClassificationRecord> {
    require_shots(shots)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "preparation angle parameter t must be positive and finite, got {t}"
        )));
    }
    let (ideal, z) = contrast_state(u, cluster)?;

    let u_norm = vec_norm(u);
    let norms = cluster.norms();
    let max_norm = norms.iter().cloned().fold(u_norm, f64::max);
    if t * max_norm > SMALL_ANGLE_LIMIT {
        return Err(Error::precondition(format!(
            "largest data norm {max_norm:.6} times t {t:.6} exceeds the small-angle budget \
             {SMALL_ANGLE_LIMIT}; the preparation needs uniformly small norms or a smaller t"
        )));
    }

    let m = cluster.len();
    let m_f = m as f64;

    // Exact ancilla-one probability of the small-angle preparation, and
    // the state it leaves behind.
    let sin_u = (u_norm * t).sin();
    let sin_v: Vec<f64> = norms.iter().map(|n| (n * t).sin()).collect();
    let p_one_exact =
        0.5 * (sin_u * sin_u + sin_v.iter().map(|s| s * s).sum::<f64>() / m_f);
    let p_one_approx = z * t * t;

    let mut prepared = Vec::with_capacity(m + 1);
    let prep_scale = (2.0 * p_one_exact).sqrt();
    prepared.push(sin_u / prep_scale);
    for s in &sin_v {
        prepared.push(-s / (m_f.sqrt() * prep_scale));
    }
    let preparation_bias = prepared
        .iter()
        .zip(&ideal)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();

    // Distance pieces.
    let mean = cluster.mean();
    let diff = vec_sub(u, &mean);
    let distance_exact = diff.iter().map(|d| d.norm_sqr()).sum::<f64>();
    let p_exact = distance_exact / (2.0 * z * z);
    let p_born_exact = distance_exact / (2.0 * z);

    // Shot sampling of the two probabilities on independent streams.
    let p_one_hat = binomial_fraction(mix_seed(PREP_PROB_SALT, seed), shots, p_one_exact);
    let p_hat = binomial_fraction(mix_seed(DIST_PROB_SALT, seed), shots, p_exact.min(1.0));

    let z_estimate = 2.0 * p_one_hat / (t * t);
    let distance_estimate = 2.0 * p_hat * z_estimate * z_estimate;

    Ok(ClassificationRecord {
        m,
        t,
        shots,
        z_cls_exact: z,
        z_cls_estimate: z_estimate,
        z_confidence_halfwidth: hoeffding_halfwidth(shots, 2.0 / (t * t)),
        p_one: ShotEstimate {
            value: p_one_hat,
            exact: p_one_exact,
            raw_value: p_one_hat,
            shots,
            confidence_halfwidth: hoeffding_halfwidth(shots, 1.0),
        },
        p_one_approx,
        p: ShotEstimate {
            value: p_hat,
            exact: p_exact,
            raw_value: p_hat,
            shots,
            confidence_halfwidth: hoeffding_halfwidth(shots, 1.0),
        },
        p_born_exact,
        preparation_bias,
        distance_exact,
        distance_estimate,
        distance_error: (distance_estimate - distance_exact).abs(),
        distance_error_from_p: 2.0 * z * z * (p_hat - p_exact).abs(),
        distance_error_from_z: 2.0 * p_exact * (z_estimate * z_estimate - z * z).abs(),
    })
}

// ---------------------------------------------------------------------------
// Kernel-trace estimation.
// ---------------------------------------------------------------------------

/// Normalized-trace estimate next to its rescaled full-trace version.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEstimateRecord {
    /// Kernel dimension M (the rescaling factor).
    pub dim: usize,
    pub shots: u64,
    /// Mean sampled diagonal entry: estimates `Tr(K)/M`.
    pub tr_over_m: ShotEstimate,
    /// The same estimate multiplied by M: estimates `Tr(K)`, with every
    /// error multiplied by M as well.
    pub tr: ShotEstimate,
    /// Spread `max - min` of the diagonal, the per-shot range.
    pub diagonal_spread: f64,
}

/// Estimate `Tr(K)/M` by sampling uniformly random diagonal entries, and
/// report the rescaled `Tr(K)` estimate beside it. The normalized
/// estimate concentrates independently of M; the rescaled one inherits
/// an error M times larger from the same shots.
pub fn trace_estimate(k: &HermitianMatrix, shots: u64, seed: u64) -> Result<TraceEstimateRecord> {
    require_shots(shots)?;
    let m = k.dim();
    let diag: Vec<f64> = (0..m).map(|i| k.entry(i, i).re).collect();
    for (i, &d) in diag.iter().enumerate() {
        if d < -1e-12 {
            return Err(Error::precondition(format!(
                "kernel diagonal entry {i} is {d:.3e}; a positive semidefinite kernel needs a \
                 nonnegative diagonal"
            )));
        }
    }
    let tr_exact: f64 = diag.iter().sum();
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;

    let mut rng = rng_from_seed(mix_seed(TRACE_DIAG_SALT, seed));
    let mut sum = 0.0f64;
    for _ in 0..shots {
        sum += diag[rng.gen_range(0..m)];
    }
    let mean = sum / shots as f64;

    let halfwidth = hoeffding_halfwidth(shots, spread);
    let m_f = m as f64;
    Ok(TraceEstimateRecord {
        dim: m,
        shots,
        tr_over_m: ShotEstimate {
            value: mean,
            exact: tr_exact / m_f,
            raw_value: mean,
            shots,
            confidence_halfwidth: halfwidth,
        },
        tr: ShotEstimate {
            value: m_f * mean,
            exact: tr_exact,
            raw_value: m_f * mean,
            shots,
            confidence_halfwidth: m_f * halfwidth,
        },
        diagonal_spread: spread,
    })
}

// ---------------------------------------------------------------------------
// Least-squares SVM system assembly.
// ---------------------------------------------------------------------------

/// Assemble the least-squares SVM saddle system for a linear kernel:
///
/// ```text
/// F = [ 0    1^T          ]        rhs = [ 0 ]
///     [ 1    K + I/gamma  ]              [ y ]
/// ```
///
/// with `K[i][j] = <x_i|x_j>`. The result is exactly Hermitian and its
/// lower-right block minus `I/gamma` is positive semidefinite (it is a
/// Gram matrix).
pub fn build_lssvm_system(
    data: &Dataset,
    y: &[f64],
    gamma: f64,
) -> Result<(HermitianMatrix, Vec<f64>)> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::precondition(format!(
            "regularization gamma must be positive and finite, got {gamma}"
        )));
    }
    let m = data.len();
    if y.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: y.len(),
        });
    }
    let gram = data.gram();
    let inv_gamma = 1.0 / gamma;
    let one = Complex64::new(1.0, 0.0);
    let f = CMatrix::from_fn(m + 1, m + 1, |i, j| match (i, j) {
        (0, 0) => Complex64::new(0.0, 0.0),
        (0, _) | (_, 0) => one,
        (i, j) => {
            let k = gram[(i - 1, j - 1)];
            if i == j {
                k + inv_gamma
            } else {
                k
            }
        }
    });
    let mut rhs = Vec::with_capacity(m + 1);
    rhs.push(0.0);
    rhs.extend_from_slice(y);
    Ok((HermitianMatrix::new(f)?, rhs))
}
