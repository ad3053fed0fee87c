//! Phase readout of a Hermitian operator through unitary evolution.
//!
//! A `k`-bit clock register turns the evolution `exp(iAt)` into a
//! distribution over grid indices `y`, peaked near `lambda t N / 2 pi`
//! (mod N), with `N = 2^k`. This module provides the exact closed-form
//! distribution, the circuit that reproduces it, and the decode /
//! time-scale bookkeeping that downstream solvers rely on.
//!
//! Two caveats are modeled faithfully rather than hidden:
//! * readout resolution is `pi / (t N)` in eigenvalue units, so small
//!   eigenvalues cost clock bits;
//! * the decode rule folds the upper half of the grid onto negative
//!   eigenvalues, so `|lambda| t` must stay below `pi` (the time-scale
//!   policy enforces a safety factor strictly less than 1).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, expm_from_decomposition, inner, spectral_bounds, HermitianMatrix,
};
use crate::statevector::{QuantumState, RegisterLayout};

/// Which spectral-radius bound sets the evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundChoice {
    /// sqrt(Tr(A A*)).
    TraceBound,
    /// Induced 1-norm (max column sum).
    OneNorm,
    /// Frobenius norm.
    Frobenius,
    /// dim * max entry magnitude.
    MaxEntry,
    /// The exact spectral radius (needs an eigensolve; reference choice).
    ExactLambdaMax,
}

/// Rule `t = safety * pi / bound`, with `safety` strictly inside (0, 1)
/// so every eigenvalue phase stays clear of the wrap-around at ±pi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeScalePolicy {
    pub bound: BoundChoice,
    pub safety: f64,
}

impl Default for TimeScalePolicy {
    fn default() -> Self {
        TimeScalePolicy {
            bound: BoundChoice::OneNorm,
            safety: 0.99,
        }
    }
}

/// Evaluate the policy on a concrete matrix.
pub fn choose_time_scale(a: &HermitianMatrix, policy: &TimeScalePolicy) -> Result<f64> {
    if !(policy.safety > 0.0 && policy.safety < 1.0) {
        return Err(Error::precondition(format!(
            "time-scale safety factor must lie strictly in (0, 1), got {}",
            policy.safety
        )));
    }
    let bounds = spectral_bounds(a);
    let bound = match policy.bound {
        BoundChoice::TraceBound => bounds.trace_bound,
        BoundChoice::OneNorm => bounds.one_norm,
        BoundChoice::Frobenius => bounds.frobenius,
        BoundChoice::MaxEntry => bounds.max_entry_bound,
        BoundChoice::ExactLambdaMax => eig_hermitian(a)?.max_abs_eigenvalue(),
    };
    if bound == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(policy.safety * PI / bound)
}

/// Clock size and evolution time for one phase readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpeConfig {
    pub clock_qubits: u32,
    pub time_scale: f64,
}

impl QpeConfig {
    pub fn new(clock_qubits: u32, time_scale: f64) -> Result<Self> {
        if clock_qubits == 0 || clock_qubits as usize > crate::statevector::MAX_QUBITS {
            return Err(Error::precondition(format!(
                "clock register needs between 1 and {} qubits, got {clock_qubits}",
                crate::statevector::MAX_QUBITS
            )));
        }
        if !(time_scale > 0.0) || !time_scale.is_finite() {
            return Err(Error::precondition(format!(
                "evolution time must be positive and finite, got {time_scale}"
            )));
        }
        Ok(QpeConfig {
            clock_qubits,
            time_scale,
        })
    }

    pub fn grid_points(&self) -> usize {
        1usize << self.clock_qubits
    }

    /// Worst-case decode error in eigenvalue units: `pi / (t N)`.
    pub fn accuracy(&self) -> f64 {
        PI / (self.time_scale * self.grid_points() as f64)
    }
}

/// Wrap a phase into (-pi, pi].
fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Squared normalized Dirichlet kernel
/// `|sin(N delta / 2) / (N sin(delta / 2))|^2`, with the removable
/// singularity at `delta = 0` evaluated exactly.
fn dirichlet_weight(delta: f64, n: usize) -> f64 {
    if delta.abs() < 1e-12 {
        return 1.0;
    }
    let nf = n as f64;
    let ratio = (nf * delta / 2.0).sin() / (delta / 2.0).sin();
    (ratio * ratio) / (nf * nf)
}

/// Exact probability of clock outcome `y` when the input is an
/// eigenvector with eigenvalue `lambda`.
pub fn qpe_probability(lambda: f64, time_scale: f64, clock_qubits: u32, y: usize) -> f64 {
    let n = 1usize << clock_qubits;
    debug_assert!(y < n);
    let delta = wrap_phase(lambda * time_scale - TAU * y as f64 / n as f64);
    dirichlet_weight(delta, n)
}

/// Full closed-form clock distribution for one eigenvalue.
pub fn qpe_distribution(lambda: f64, time_scale: f64, clock_qubits: u32) -> Vec<f64> {
    let n = 1usize << clock_qubits;
    (0..n)
        .map(|y| qpe_probability(lambda, time_scale, clock_qubits, y))
        .collect()
}

/// Closed-form clock distribution for a general input: the weighted
/// mixture of the single-eigenvalue distributions. `weights` are the
/// squared overlaps with each eigenvector and should sum to 1.
pub fn qpe_distribution_mixture(
    eigenvalues: &[f64],
    weights: &[f64],
    time_scale: f64,
    clock_qubits: u32,
) -> Result<Vec<f64>> {
    if eigenvalues.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            got: weights.len(),
        });
    }
    let n = 1usize << clock_qubits;
    let mut out = vec![0.0f64; n];
    for (&lambda, &w) in eigenvalues.iter().zip(weights) {
        for (y, slot) in out.iter_mut().enumerate() {
            *slot += w * qpe_probability(lambda, time_scale, clock_qubits, y);
        }
    }
    Ok(out)
}

/// Grid index whose decoded value is nearest to `lambda` (ties round
/// toward the smaller index), after wrapping modulo the grid.
pub fn grid_index(lambda: f64, time_scale: f64, clock_qubits: u32) -> usize {
    let n = 1i64 << clock_qubits;
    let g = lambda * time_scale * (n as f64) / TAU;
    let y = (g - 0.5).ceil() as i64;
    y.rem_euclid(n) as usize
}

/// Decode a clock outcome into an eigenvalue estimate: indices in the
/// lower half of the grid are positive phases, the upper half wraps to
/// negative ones, and `y = N/2` reads as `+pi/t`.
pub fn decode_eigenvalue(y: usize, clock_qubits: u32, time_scale: f64) -> f64 {
    let n = 1usize << clock_qubits;
    debug_assert!(y < n);
    let frac = y as f64 / n as f64;
    if 2 * y <= n {
        TAU * frac / time_scale
    } else {
        -TAU * (1.0 - frac) / time_scale
    }
}

/// Result of a circuit-based phase readout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QpeOutcome {
    pub clock_qubits: u32,
    pub time_scale: f64,
    /// Exact clock distribution (length `2^clock_qubits`).
    pub probabilities: Vec<f64>,
    /// Most likely clock outcome (first index on ties).
    pub top_outcome: usize,
    /// Decoded eigenvalue estimate at the top outcome.
    pub estimate: f64,
    /// Worst-case decode error `pi / (t N)`.
    pub accuracy: f64,
}

/// Run the phase-readout circuit: prepare the input on the system
/// register, spread the clock uniformly, apply the controlled powers of
/// `exp(iAt)`, invert the Fourier transform on the clock, and read the
/// exact clock marginal. The system dimension must be a power of two.
pub fn qpe_circuit(
    a: &HermitianMatrix,
    input: &[Complex64],
    config: &QpeConfig,
) -> Result<QpeOutcome> {
    let dim = a.dim();
    if !dim.is_power_of_two() {
        return Err(Error::precondition(format!(
            "circuit path needs a power-of-two system dimension, got {dim}"
        )));
    }
    let system_qubits = dim.trailing_zeros() as usize;
    let dec = eig_hermitian(a)?;
    let u = expm_from_decomposition(&dec, config.time_scale);

    let layout = RegisterLayout::new(&[
        ("clock", config.clock_qubits as usize),
        ("system", system_qubits),
    ])?;
    let mut state = QuantumState::with_register_state(layout, "system", input)?;
    state.qft("clock")?;
    state.apply_controlled_power("clock", "system", &u)?;
    state.inverse_qft("clock")?;

    let table = state.measure("clock")?;
    let top_outcome = table.argmax();
    Ok(QpeOutcome {
        clock_qubits: config.clock_qubits,
        time_scale: config.time_scale,
        probabilities: table.probabilities,
        top_outcome,
        estimate: decode_eigenvalue(top_outcome, config.clock_qubits, config.time_scale),
        accuracy: config.accuracy(),
    })
}

/// Squared overlaps of `input` with the eigenvectors of a decomposition;
/// convenience for comparing the circuit against the closed form.
pub fn eigenbasis_weights(
    dec: &crate::linalg::SpectralDecomposition,
    input: &[Complex64],
) -> Vec<f64> {
    (0..dec.dim())
        .map(|j| inner(&dec.eigenvector(j), input).norm_sqr())
        .collect()
}
