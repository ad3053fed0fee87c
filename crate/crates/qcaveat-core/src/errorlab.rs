//! Error ledgers and complexity models for the solver pipeline.
//!
//! The ledger decomposes every deviation between the true solution
//! `x = A^{-1} b` and the solver's reconstruction into named, separately
//! measurable pieces: squared norms `Z` and `Z-tilde`, the state-level
//! error between normalized directions, the classical error between full
//! vectors, and the linear-system residual. The identity
//! `residual^2 = sum_j |beta_j (lambda_j / lambda-tilde_j - 1)|^2`
//! (with the inverse taken as 0 on dropped modes) ties the direct matrix
//! computation to the per-mode view; it is exact for the analytic solver
//! model and for circuit runs whose spectra sit on the clock grid.
//!
//! The cost side collects the complexity shapes of the pipeline as unit-
//! constant formulas over a [`CostModel`]: readout precision, condition
//! number, time rescaling, thresholding, and the norm-aware budget. These
//! are scaling laws in "cost units", never wall-clock predictions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hhl::{HhlMode, HhlResult};
use crate::linalg::{eig_hermitian, inner, vec_norm, vec_sub, HermitianMatrix};
use crate::qpe::QpeConfig;

/// Full error decomposition of one solver run.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// Squared norm of the true solution, `sum |beta_j / lambda_j|^2`.
    pub z: f64,
    /// Squared norm of the reconstructed solution,
    /// `sum_kept |beta_j / lambda-tilde_j|^2` from the mode ledger.
    pub z_tilde: f64,
    /// Distance between unit-norm directions, `||x-hat - x-tilde-hat||`.
    pub state_error: f64,
    /// Distance between full vectors, `||x - x-tilde||`.
    pub classical_error: f64,
    /// Direct linear-system residual `||A x-tilde - b||`.
    pub residual: f64,
    /// The same residual predicted mode by mode; agreement with
    /// `residual` is the ledger's internal cross-check.
    pub residual_mode_sum: f64,
    /// Per-mode ledger carried over from the solver run.
    pub per_mode: Vec<HhlMode>,
}

/// Compute the ledger for a solver result against the exact solution.
pub fn error_report(
    a: &HermitianMatrix,
    b: &[Complex64],
    result: &HhlResult,
) -> Result<ErrorReport> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if result.decoded_solution.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: result.decoded_solution.len(),
        });
    }
    let b_norm = vec_norm(b);
    if b_norm == 0.0 {
        return Err(Error::ZeroState);
    }

    // Exact solution, mode by mode.
    let dec = eig_hermitian(a)?;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut z = 0.0f64;
    for j in 0..n {
        let lambda = dec.eigenvalues[j];
        let u = dec.eigenvector(j);
        let beta = inner(&u, b);
        if lambda == 0.0 {
            if beta.norm() > 1e-14 * b_norm {
                return Err(Error::Singular { ratio: 0.0 });
            }
            continue;
        }
        let coeff = beta / Complex64::new(lambda, 0.0);
        z += coeff.norm_sqr();
        for i in 0..n {
            x[i] += coeff * u[i];
        }
    }

    let x_tilde = &result.decoded_solution;
    let x_tilde_norm = vec_norm(x_tilde);
    if x_tilde_norm == 0.0 {
        return Err(Error::ZeroState);
    }

    let z_tilde: f64 = result
        .modes
        .iter()
        .filter(|m| m.kept)
        .map(|m| (m.beta / Complex64::new(m.decoded_eigenvalue, 0.0)).norm_sqr())
        .sum();

    let x_norm = z.sqrt();
    let state_error = {
        let diff: Vec<Complex64> = x
            .iter()
            .zip(x_tilde)
            .map(|(xi, ti)| xi / x_norm - ti / x_tilde_norm)
            .collect();
        vec_norm(&diff)
    };
    let classical_error = vec_norm(&vec_sub(&x, x_tilde));

    // Residual by the direct matrix route...
    let ax = a.mul_vec(x_tilde);
    let residual = vec_norm(&vec_sub(&ax, b));
    // ...and by the per-mode prediction (dropped modes invert to 0, so
    // they contribute their full overlap).
    let residual_sq_modes: f64 = result
        .modes
        .iter()
        .map(|m| {
            if m.kept {
                let factor = m.eigenvalue / m.decoded_eigenvalue - 1.0;
                m.beta.norm_sqr() * factor * factor
            } else {
                m.beta.norm_sqr()
            }
        })
        .sum();

    Ok(ErrorReport {
        z,
        z_tilde,
        state_error,
        classical_error,
        residual,
        residual_mode_sum: residual_sq_modes.sqrt(),
        per_mode: result.modes.clone(),
    })
}

/// Simulation accuracy needed to hit a prediction-level target:
/// `epsilon = target / max(kappa * b_norm^2, x_norm)`. The max is the
/// amplification caveat: whichever of the two norm factors is larger
/// decides how much the raw accuracy must be tightened.
pub fn accuracy_budget(kappa: f64, b_norm: f64, x_norm: f64, target: f64) -> Result<f64> {
    for (name, v) in [
        ("kappa", kappa),
        ("b_norm", b_norm),
        ("x_norm", x_norm),
        ("target", target),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::precondition(format!(
                "accuracy budget needs positive finite {name}, got {v}"
            )));
        }
    }
    Ok(target / (kappa * b_norm * b_norm).max(x_norm))
}

/// Inputs to the complexity formulas. Only `dim` is always required;
/// each variant checks for the fields it consumes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CostModel {
    /// Problem dimension M (enters all formulas as ln M).
    pub dim: usize,
    /// Sparseness parameter s of the evolution.
    pub sparseness: Option<f64>,
    pub kappa: Option<f64>,
    /// Simulation accuracy epsilon.
    pub epsilon: Option<f64>,
    /// Eigenvalue readout accuracy delta.
    pub delta: Option<f64>,
    /// Evolution time t.
    pub time_scale: Option<f64>,
    /// Eigenvalue threshold mu.
    pub mu: Option<f64>,
    /// Simulation-method exponent gamma (readout-precision variant).
    pub gamma: Option<f64>,
    pub b_norm: Option<f64>,
    pub x_norm: Option<f64>,
    /// Smallest kept decoded eigenvalue magnitude.
    pub lambda_min: Option<f64>,
    /// Prediction-level accuracy target.
    pub epsilon_tilde: Option<f64>,
}

impl CostModel {
    pub fn new(dim: usize) -> Self {
        CostModel {
            dim,
            sparseness: None,
            kappa: None,
            epsilon: None,
            delta: None,
            time_scale: None,
            mu: None,
            gamma: None,
            b_norm: None,
            x_norm: None,
            lambda_min: None,
            epsilon_tilde: None,
        }
    }

    /// Seed readout fields from a phase-estimation config: `delta` is the
    /// decode accuracy `pi / (t N)` and `time_scale` is its `t`.
    pub fn from_qpe(dim: usize, config: &QpeConfig) -> Self {
        let mut model = CostModel::new(dim);
        model.delta = Some(config.accuracy());
        model.time_scale = Some(config.time_scale);
        model
    }

    pub fn with_sparseness(mut self, s: f64) -> Self {
        self.sparseness = Some(s);
        self
    }
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }
    pub fn with_time_scale(mut self, t: f64) -> Self {
        self.time_scale = Some(t);
        self
    }
    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = Some(mu);
        self
    }
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }
    pub fn with_b_norm(mut self, b_norm: f64) -> Self {
        self.b_norm = Some(b_norm);
        self
    }
    pub fn with_x_norm(mut self, x_norm: f64) -> Self {
        self.x_norm = Some(x_norm);
        self
    }
    pub fn with_lambda_min(mut self, lambda_min: f64) -> Self {
        self.lambda_min = Some(lambda_min);
        self
    }
    pub fn with_epsilon_tilde(mut self, epsilon_tilde: f64) -> Self {
        self.epsilon_tilde = Some(epsilon_tilde);
        self
    }
}

/// The five complexity shapes, named by what drives them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CostVariant {
    /// Readout-precision cost: `ln(M) / (epsilon * delta^gamma)`.
    QpePrecision,
    /// Condition-number cost: `ln(M) s^2 kappa^2 / epsilon`.
    ConditionNumber,
    /// Time-rescaled cost: `ln(M) s^2 / (t^2 lambda_min^2 epsilon)`.
    TimeRescaled,
    /// Threshold cost: `ln(M) s^2 / (t^2 mu^2 epsilon)`.
    Thresholded,
    /// Norm-aware cost:
    /// `ln(M) s^2 kappa^2 max(kappa b_norm^2, x_norm) / epsilon_tilde`.
    NormAware,
}

impl CostVariant {
    fn name(self) -> &'static str {
        match self {
            CostVariant::QpePrecision => "QpePrecision",
            CostVariant::ConditionNumber => "ConditionNumber",
            CostVariant::TimeRescaled => "TimeRescaled",
            CostVariant::Thresholded => "Thresholded",
            CostVariant::NormAware => "NormAware",
        }
    }
}

fn require(
    value: Option<f64>,
    field: &'static str,
    variant: CostVariant,
) -> Result<f64> {
    let v = value.ok_or(Error::CostFieldMissing {
        field,
        variant: variant.name(),
    })?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::precondition(format!(
            "cost model field {field} must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

/// Evaluate one complexity formula in unit-constant cost units.
pub fn hhl_cost(model: &CostModel, variant: CostVariant) -> Result<f64> {
    if model.dim < 2 {
        return Err(Error::precondition(format!(
            "cost model dimension must be at least 2, got {}",
            model.dim
        )));
    }
    let lnm = (model.dim as f64).ln();
    match variant {
        CostVariant::QpePrecision => {
            let epsilon = require(model.epsilon, "epsilon", variant)?;
            let delta = require(model.delta, "delta", variant)?;
            let gamma = require(model.gamma, "gamma", variant)?;
            Ok(lnm / (epsilon * delta.powf(gamma)))
        }
        CostVariant::ConditionNumber => {
            let s = require(model.sparseness, "sparseness", variant)?;
            let kappa = require(model.kappa, "kappa", variant)?;
            let epsilon = require(model.epsilon, "epsilon", variant)?;
            Ok(lnm * s * s * kappa * kappa / epsilon)
        }
        CostVariant::TimeRescaled => {
            let s = require(model.sparseness, "sparseness", variant)?;
            let t = require(model.time_scale, "time_scale", variant)?;
            let lam = require(model.lambda_min, "lambda_min", variant)?;
            let epsilon = require(model.epsilon, "epsilon", variant)?;
            Ok(lnm * s * s / (t * t * lam * lam * epsilon))
        }
        CostVariant::Thresholded => {
            let s = require(model.sparseness, "sparseness", variant)?;
            let t = require(model.time_scale, "time_scale", variant)?;
            let mu = require(model.mu, "mu", variant)?;
            let epsilon = require(model.epsilon, "epsilon", variant)?;
            Ok(lnm * s * s / (t * t * mu * mu * epsilon))
        }
        CostVariant::NormAware => {
            let s = require(model.sparseness, "sparseness", variant)?;
            let kappa = require(model.kappa, "kappa", variant)?;
            let b_norm = require(model.b_norm, "b_norm", variant)?;
            let x_norm = require(model.x_norm, "x_norm", variant)?;
            let target = require(model.epsilon_tilde, "epsilon_tilde", variant)?;
            Ok(lnm * s * s * kappa * kappa * (kappa * b_norm * b_norm).max(x_norm) / target)
        }
    }
}

/// Amplitude-counting cost `sqrt(N / K) / epsilon`: counting K marked
/// items among N to relative precision epsilon. At `epsilon = 1/K` the
/// absolute count is pinned down and the cost becomes `sqrt(N K)`.
pub fn counting_cost(n_items: f64, k_marked: f64, epsilon: f64) -> Result<f64> {
    for (name, v) in [
        ("n_items", n_items),
        ("k_marked", k_marked),
        ("epsilon", epsilon),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::precondition(format!(
                "counting cost needs positive finite {name}, got {v}"
            )));
        }
    }
    if k_marked > n_items {
        return Err(Error::precondition(format!(
            "marked count {k_marked} exceeds item count {n_items}"
        )));
    }
    Ok((n_items / k_marked).sqrt() / epsilon)
}
