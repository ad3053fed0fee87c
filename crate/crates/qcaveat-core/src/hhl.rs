//! Quantum linear-system solver (HHL) at two fidelities.
//!
//! * [`hhl_ideal`] — the analytic model: eigenvalues are rounded to the
//!   clock grid, components below the threshold `mu` are dropped, and the
//!   solution is assembled mode by mode. This is the object every error
//!   ledger downstream reasons about.
//! * [`hhl_circuit`] — the full statevector pipeline: phase readout,
//!   controlled ancilla rotation, uncompute, postselection. On spectra
//!   that sit exactly on the clock grid it reproduces the ideal model;
//!   off the grid it shows the leakage the ideal model rounds away.
//!
//! Both paths report the same diagnostics: per-mode ledger, kept counts,
//! discarded weight, and a success probability (exact, or estimated from
//! a finite number of shots).

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, expm_from_decomposition, inner, vec_norm, HermitianMatrix,
    SpectralDecomposition,
};
use crate::qpe::{decode_eigenvalue, grid_index};
use crate::rng::{mix_seed, rng_from_seed};
use crate::statevector::{QuantumState, RegisterLayout};

/// Salt for the internal shot stream used when `shots > 0`; combined with
/// the shot count and the exact probability so repeated identical runs
/// reproduce the same estimate.
const SHOT_STREAM_SALT: u64 = 0x6c69_6e73_6f6c_7665;

/// Safety margin keeping the default rotation constant strictly below the
/// smallest kept eigenvalue magnitude.
const ROTATION_MARGIN: f64 = 1e-9;

/// All tunables of one solver run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HhlConfig {
    /// Evolution time `t`; every `|lambda| t` must stay below pi.
    pub time_scale: f64,
    /// Clock register size `k`; the readout grid has `2^k` points.
    pub clock_qubits: u32,
    /// Eigenvalue threshold: decoded magnitudes below `mu` are dropped.
    pub mu: f64,
    /// Rotation constant `C`; `None` picks the largest valid value,
    /// `(1 - 1e-9) *` the smallest kept decoded magnitude.
    pub rotation_constant: Option<f64>,
    /// `0` = exact postselection probability; otherwise a binomial
    /// estimate from this many simulated repetitions.
    pub shots: usize,
}

impl HhlConfig {
    pub fn new(time_scale: f64, clock_qubits: u32, mu: f64) -> Result<Self> {
        let config = HhlConfig {
            time_scale,
            clock_qubits,
            mu,
            rotation_constant: None,
            shots: 0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_rotation_constant(mut self, c: f64) -> Self {
        self.rotation_constant = Some(c);
        self
    }

    pub fn with_shots(mut self, shots: usize) -> Self {
        self.shots = shots;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_scale > 0.0) || !self.time_scale.is_finite() {
            return Err(Error::precondition(format!(
                "evolution time must be positive and finite, got {}",
                self.time_scale
            )));
        }
        if self.clock_qubits == 0 || self.clock_qubits as usize >= crate::statevector::MAX_QUBITS {
            return Err(Error::precondition(format!(
                "clock register needs between 1 and {} qubits, got {}",
                crate::statevector::MAX_QUBITS - 1,
                self.clock_qubits
            )));
        }
        if !(self.mu >= 0.0) {
            return Err(Error::precondition(format!(
                "threshold mu must be nonnegative, got {}",
                self.mu
            )));
        }
        if let Some(c) = self.rotation_constant {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::precondition(format!(
                    "rotation constant must be positive and finite, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// One eigencomponent's journey through the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HhlMode {
    /// Position in the (magnitude-sorted) eigendecomposition.
    pub index: usize,
    /// True eigenvalue `lambda_j`.
    pub eigenvalue: f64,
    /// Clock grid index this eigenvalue rounds to.
    pub grid_outcome: usize,
    /// Decoded (grid-rounded) eigenvalue; 0 means the mode is invisible
    /// to the readout and is always dropped.
    pub decoded_eigenvalue: f64,
    /// Overlap `beta_j = <u_j|b>` with the unnormalized right-hand side.
    pub beta: Complex64,
    /// Whether the mode survives the threshold filter.
    pub kept: bool,
}

/// Output of either solver path.
#[derive(Debug, Clone)]
pub struct HhlResult {
    /// Normalized solution state on the system register (zero-padded to a
    /// power-of-two dimension when the problem dimension is not one).
    pub solution_state: QuantumState,
    /// Classical reconstruction `sqrt(Z-tilde) * |x-tilde>` in the true
    /// problem dimension.
    pub decoded_solution: Vec<Complex64>,
    /// Postselection success probability; a binomial estimate when the
    /// config requested shots, otherwise equal to the exact value.
    pub success_probability: f64,
    /// Exact postselection success probability.
    pub success_probability_exact: f64,
    /// Rotation constant actually used.
    pub rotation_constant: f64,
    pub kept_eigenvalue_count: usize,
    /// Fraction of input weight sitting on dropped modes.
    pub discarded_weight: f64,
    /// Squared norm of the reconstructed solution.
    pub z_tilde: f64,
    /// Norm of the right-hand side.
    pub b_norm: f64,
    /// Per-mode ledger (from the analytic model in both paths).
    pub modes: Vec<HhlMode>,
}

/// Largest rotation constant that keeps every ancilla amplitude valid.
pub fn default_rotation_constant(min_kept_decoded: f64) -> f64 {
    min_kept_decoded * (1.0 - ROTATION_MARGIN)
}

/// Classify every eigencomponent: overlap, grid rounding, filter verdict.
pub fn analyze_modes(
    dec: &SpectralDecomposition,
    b: &[Complex64],
    config: &HhlConfig,
) -> Vec<HhlMode> {
    (0..dec.dim())
        .map(|j| {
            let eigenvalue = dec.eigenvalues[j];
            let y = grid_index(eigenvalue, config.time_scale, config.clock_qubits);
            let decoded = decode_eigenvalue(y, config.clock_qubits, config.time_scale);
            let beta = inner(&dec.eigenvector(j), b);
            HhlMode {
                index: j,
                eigenvalue,
                grid_outcome: y,
                decoded_eigenvalue: decoded,
                beta,
                kept: decoded != 0.0 && decoded.abs() >= config.mu,
            }
        })
        .collect()
}

/// Resolve the rotation constant against the smallest kept magnitude.
fn resolve_rotation_constant(config: &HhlConfig, min_kept_decoded: f64) -> Result<f64> {
    let c = config
        .rotation_constant
        .unwrap_or_else(|| default_rotation_constant(min_kept_decoded));
    if c > min_kept_decoded * (1.0 + 1e-12) {
        return Err(Error::RotationConstantTooLarge {
            constant: c,
            lambda: min_kept_decoded,
        });
    }
    Ok(c)
}

fn smallest_kept_magnitude(modes: &[HhlMode]) -> Option<f64> {
    modes
        .iter()
        .filter(|m| m.kept)
        .map(|m| m.decoded_eigenvalue.abs())
        .fold(None, |acc, v| {
            Some(match acc {
                None => v,
                Some(a) => a.min(v),
            })
        })
}

/// Deterministic binomial estimate of `p` from `shots` draws.
fn binomial_estimate(p: f64, shots: usize) -> f64 {
    let seed = mix_seed(SHOT_STREAM_SALT, (shots as u64) ^ p.to_bits());
    let mut rng = rng_from_seed(seed);
    let hits = (0..shots).filter(|_| rng.gen::<f64>() < p).count();
    hits as f64 / shots as f64
}

/// Wrap a normalized vector into a single-register state, zero-padding to
/// the next power-of-two dimension.
fn pack_solution_state(x_normalized: &[Complex64]) -> Result<QuantumState> {
    let padded = x_normalized.len().next_power_of_two().max(2);
    let qubits = padded.trailing_zeros() as usize;
    let mut amps = x_normalized.to_vec();
    amps.resize(padded, Complex64::new(0.0, 0.0));
    let layout = RegisterLayout::new(&[("system", qubits)])?;
    QuantumState::from_amplitudes(layout, amps)
}

/// Analytic solver: round every eigenvalue to the clock grid, drop
/// filtered modes, invert the rest.
pub fn hhl_ideal(a: &HermitianMatrix, b: &[Complex64], config: &HhlConfig) -> Result<HhlResult> {
    config.validate()?;
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }
    let b_norm = vec_norm(b);
    if b_norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let dec = eig_hermitian(a)?;
    let modes = analyze_modes(&dec, b, config);
    let min_kept = smallest_kept_magnitude(&modes).ok_or(Error::AllModesFiltered { mu: config.mu })?;
    let c = resolve_rotation_constant(config, min_kept)?;

    let n = a.dim();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut z_tilde = 0.0f64;
    let mut kept_weight = 0.0f64;
    let mut dropped_weight = 0.0f64;
    for mode in &modes {
        if !mode.kept {
            dropped_weight += mode.beta.norm_sqr();
            continue;
        }
        kept_weight += mode.beta.norm_sqr();
        let coeff = mode.beta / Complex64::new(mode.decoded_eigenvalue, 0.0);
        z_tilde += coeff.norm_sqr();
        let u = dec.eigenvector(mode.index);
        for i in 0..n {
            x[i] += coeff * u[i];
        }
    }

    if z_tilde == 0.0 {
        // Every kept mode is orthogonal to b: the ancilla branch that
        // would carry the solution has zero amplitude.
        return Err(Error::PostselectionFailed { probability: 0.0 });
    }
    let success_exact = c * c * z_tilde / kept_weight;
    let success = if config.shots == 0 {
        success_exact
    } else {
        binomial_estimate(success_exact, config.shots)
    };

    let scale = z_tilde.sqrt();
    let x_normalized: Vec<Complex64> = x.iter().map(|z| z / scale).collect();

    Ok(HhlResult {
        solution_state: pack_solution_state(&x_normalized)?,
        decoded_solution: x,
        success_probability: success,
        success_probability_exact: success_exact,
        rotation_constant: c,
        kept_eigenvalue_count: modes.iter().filter(|m| m.kept).count(),
        discarded_weight: dropped_weight / (b_norm * b_norm),
        z_tilde,
        b_norm,
        modes,
    })
}

/// Full statevector pipeline. The system dimension must be a power of
/// two; the readout model projects the uncomputed clock back onto zero
/// before extracting the solution register.
pub fn hhl_circuit(a: &HermitianMatrix, b: &[Complex64], config: &HhlConfig) -> Result<HhlResult> {
    config.validate()?;
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }
    let dim = a.dim();
    if !dim.is_power_of_two() {
        return Err(Error::precondition(format!(
            "circuit path needs a power-of-two system dimension, got {dim}"
        )));
    }
    let b_norm = vec_norm(b);
    if b_norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let b_hat: Vec<Complex64> = b.iter().map(|z| z / b_norm).collect();

    let dec = eig_hermitian(a)?;
    let modes = analyze_modes(&dec, b, config);
    let min_kept = smallest_kept_magnitude(&modes).ok_or(Error::AllModesFiltered { mu: config.mu })?;
    let c = resolve_rotation_constant(config, min_kept)?;

    let system_qubits = dim.trailing_zeros() as usize;
    let layout = RegisterLayout::new(&[
        ("ancilla", 1),
        ("clock", config.clock_qubits as usize),
        ("system", system_qubits),
    ])?;
    let u = expm_from_decomposition(&dec, config.time_scale);

    let mut state = QuantumState::with_register_state(layout.clone(), "system", &b_hat)?;
    state.qft("clock")?;
    state.apply_controlled_power("clock", "system", &u)?;
    state.inverse_qft("clock")?;

    // Controlled rotation: for each clock value y with a valid decoded
    // eigenvalue, rotate the ancilla by sin = C / lambda-hat. Values whose
    // magnitude falls below mu — or below C, where the rotation would stop
    // being unitary — are left untouched.
    let grid_points = 1usize << config.clock_qubits;
    let rotations: Vec<Option<(f64, f64)>> = (0..grid_points)
        .map(|y| {
            let lam = decode_eigenvalue(y, config.clock_qubits, config.time_scale);
            if lam == 0.0 || lam.abs() < config.mu || lam.abs() < c {
                None
            } else {
                let s = c / lam;
                Some(((1.0 - s * s).max(0.0).sqrt(), s))
            }
        })
        .collect();
    let total_qubits = layout.qubits();
    let half = 1usize << (total_qubits - 1); // ancilla is the top bit
    let (clock_start, clock_width) = layout.locate("clock")?;
    let clock_shift = total_qubits - clock_start - clock_width;
    {
        let amps = state.amplitudes_mut();
        for i in 0..half {
            let y = (i >> clock_shift) & (grid_points - 1);
            if let Some((cos_r, sin_r)) = rotations[y] {
                let a0 = amps[i];
                let a1 = amps[i | half];
                amps[i] = a0 * cos_r - a1 * sin_r;
                amps[i | half] = a0 * sin_r + a1 * cos_r;
            }
        }
    }

    // Uncompute the phase readout.
    state.qft("clock")?;
    state.apply_controlled_power("clock", "system", &u.adjoint())?;
    state.inverse_qft("clock")?;

    // Postselect the ancilla, then read the clock back at zero (the
    // uncompute returns it there exactly on-grid; off-grid this projection
    // is part of the readout model).
    let (p_ancilla, after_ancilla) = state.project_register("ancilla", 1)?;
    let (p_clock, after_clock) = after_ancilla.project_register("clock", 0)?;
    let x_hat = after_clock.register_state("system")?;

    let p_joint = p_ancilla * p_clock;
    let norm_model = b_norm * p_joint.sqrt() / c;
    let decoded: Vec<Complex64> = x_hat.iter().map(|z| z * norm_model).collect();

    let success = if config.shots == 0 {
        p_ancilla
    } else {
        binomial_estimate(p_ancilla, config.shots)
    };

    let dropped_weight: f64 = modes
        .iter()
        .filter(|m| !m.kept)
        .map(|m| m.beta.norm_sqr())
        .sum();

    Ok(HhlResult {
        solution_state: pack_solution_state(&x_hat)?,
        decoded_solution: decoded,
        success_probability: success,
        success_probability_exact: p_ancilla,
        rotation_constant: c,
        kept_eigenvalue_count: modes.iter().filter(|m| m.kept).count(),
        discarded_weight: dropped_weight / (b_norm * b_norm),
        z_tilde: norm_model * norm_model,
        b_norm,
        modes,
    })
}

/// Multiply an operator by a positive time factor: eigenvalues scale by
/// `t`, eigenvectors are untouched. This is the rescaling that trades
/// spectral range against readout resolution.
pub fn rescale_operator(a: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "rescale factor must be positive and finite, got {t}"
        )));
    }
    Ok(a.scaled(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_vec, thresholded_solve, vec_max_abs_diff, vec_sub};
    use crate::rng::rng_from_seed;
    use crate::synth;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Norm distance between normalized vectors, minimized over a global
    /// phase — the right metric when two pipelines may disagree by an
    /// overall phase factor.
    fn phase_free_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        let overlap = inner(a, b).norm();
        (2.0 - 2.0 * overlap).max(0.0).sqrt()
    }

    /// On-grid identity config: lambda = 1 decodes exactly at t = pi/2.
    fn identity_config(k: u32) -> HhlConfig {
        HhlConfig::new(FRAC_PI_2, k, 0.0).unwrap()
    }

    #[test]
    fn identity_matrix_returns_input_direction() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        let mut rng = rng_from_seed(1);
        let b = synth::random_unit_vector(4, &mut rng);
        let result = hhl_ideal(&a, &b, &identity_config(4)).unwrap();
        assert!(vec_max_abs_diff(&result.decoded_solution, &b) < 1e-10);
        assert_eq!(result.kept_eigenvalue_count, 4);
        assert!(result.discarded_weight < 1e-15);
        // Success probability is C^2 here (all eigenvalues equal 1).
        let c = result.rotation_constant;
        assert!((result.success_probability - c * c).abs() < 1e-12);
    }

    #[test]
    fn diagonal_threshold_truncates_componentwise() {
        // All eigenvalues on-grid at t = pi/2, k = 4 (lambda * 4 integer).
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.75, 0.5, 0.25]).unwrap();
        let b = real_vec(&[0.4, -0.3, 0.6, 0.2]);
        let config = HhlConfig::new(FRAC_PI_2, 4, 0.4).unwrap();
        let result = hhl_ideal(&a, &b, &config).unwrap();
        let want = real_vec(&[0.4, -0.3 / 0.75, 1.2, 0.0]);
        assert!(vec_max_abs_diff(&result.decoded_solution, &want) < 1e-12);
        assert_eq!(result.kept_eigenvalue_count, 3);
        let b_sq = 0.4f64.powi(2) + 0.3f64.powi(2) + 0.6f64.powi(2) + 0.2f64.powi(2);
        assert!((result.discarded_weight - 0.2f64.powi(2) / b_sq).abs() < 1e-12);
    }

    #[test]
    fn on_grid_solver_matches_classical_oracle() {
        let mut rng = rng_from_seed(2);
        let t = 0.9;
        let k = 6u32;
        for _ in 0..5 {
            let spectrum = synth::on_grid_spectrum(4, k, t, &mut rng);
            let (a, _) = synth::hermitian_with_spectrum(&spectrum, &mut rng);
            let b = synth::random_unit_vector(4, &mut rng);
            let config = HhlConfig::new(t, k, 0.0).unwrap();
            let result = hhl_ideal(&a, &b, &config).unwrap();
            let x = thresholded_solve(&a, &b, 0.0).unwrap();
            assert!(vec_max_abs_diff(&result.decoded_solution, &x) < 1e-9);
        }
    }

    #[test]
    fn filtering_everything_errors() {
        let a = HermitianMatrix::from_diagonal(&[0.1, 0.2]).unwrap();
        let b = real_vec(&[1.0, 1.0]);
        let config = HhlConfig::new(1.0, 6, 0.5).unwrap();
        assert!(matches!(
            hhl_ideal(&a, &b, &config),
            Err(Error::AllModesFiltered { .. })
        ));
    }

    #[test]
    fn unreadable_modes_are_dropped_even_without_threshold() {
        // lambda = 0.001 at t = pi/2, k = 3 rounds to grid index 0 and can
        // never be inverted, threshold or not.
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.001]).unwrap();
        let b = real_vec(&[1.0, 1.0]);
        let config = HhlConfig::new(FRAC_PI_2, 3, 0.0).unwrap();
        let result = hhl_ideal(&a, &b, &config).unwrap();
        assert_eq!(result.kept_eigenvalue_count, 1);
        assert!((result.discarded_weight - 0.5).abs() < 1e-12);
        assert!(!result.modes.iter().any(|m| m.kept && m.eigenvalue == 0.001));
    }

    #[test]
    fn oversized_rotation_constant_is_rejected() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.5]).unwrap();
        let b = real_vec(&[1.0, 1.0]);
        let config = HhlConfig::new(FRAC_PI_2, 4, 0.0)
            .unwrap()
            .with_rotation_constant(0.75);
        assert!(matches!(
            hhl_ideal(&a, &b, &config),
            Err(Error::RotationConstantTooLarge { .. })
        ));
        let ok = HhlConfig::new(FRAC_PI_2, 4, 0.0)
            .unwrap()
            .with_rotation_constant(0.5);
        assert!(hhl_ideal(&a, &b, &ok).is_ok());
    }

    #[test]
    fn shot_estimates_are_deterministic_and_near_exact() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.5]).unwrap();
        let b = real_vec(&[0.6, 0.8]);
        let config = HhlConfig::new(FRAC_PI_2, 4, 0.0).unwrap().with_shots(4000);
        let r1 = hhl_ideal(&a, &b, &config).unwrap();
        let r2 = hhl_ideal(&a, &b, &config).unwrap();
        assert_eq!(r1.success_probability, r2.success_probability);
        let p = r1.success_probability_exact;
        let sigma = (p * (1.0 - p) / 4000.0).sqrt();
        assert!((r1.success_probability - p).abs() < 5.0 * sigma + 1e-9);
        // Exact mode reports the same number in both fields.
        let exact = hhl_ideal(&a, &b, &HhlConfig::new(FRAC_PI_2, 4, 0.0).unwrap()).unwrap();
        assert_eq!(exact.success_probability, exact.success_probability_exact);
    }

    #[test]
    fn mu_filter_is_monotone() {
        let mut rng = rng_from_seed(3);
        let spectrum = [1.0, -0.7, 0.45, 0.2];
        let (a, _) = synth::hermitian_with_spectrum(&spectrum, &mut rng);
        let b = synth::random_unit_vector(4, &mut rng);
        let mut last_kept = usize::MAX;
        let mut last_dropped = -1.0f64;
        for mu in [0.0, 0.1, 0.3, 0.5, 0.8] {
            let config = HhlConfig::new(0.9 * PI, 7, mu).unwrap();
            let result = hhl_ideal(&a, &b, &config).unwrap();
            assert!(result.kept_eigenvalue_count <= last_kept);
            assert!(result.discarded_weight >= last_dropped - 1e-15);
            last_kept = result.kept_eigenvalue_count;
            last_dropped = result.discarded_weight;
        }
    }

    #[test]
    fn non_power_of_two_solutions_are_zero_padded() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.5, 0.25]).unwrap();
        let b = real_vec(&[1.0, 1.0, 1.0]);
        let config = HhlConfig::new(FRAC_PI_2, 5, 0.0).unwrap();
        let result = hhl_ideal(&a, &b, &config).unwrap();
        assert_eq!(result.decoded_solution.len(), 3);
        assert_eq!(result.solution_state.dim(), 4);
        assert!(result.solution_state.amplitude(3).norm() < 1e-15);
        assert!((result.solution_state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_identity_gives_rotation_constant_squared() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 1.0]).unwrap();
        let b = real_vec(&[0.6, 0.8]);
        let config = identity_config(3).with_rotation_constant(0.5);
        let result = hhl_circuit(&a, &b, &config).unwrap();
        assert!((result.success_probability - 0.25).abs() < 1e-10);
        let state = result.solution_state.amplitudes();
        assert!(vec_max_abs_diff(state, &b) < 1e-10);
        assert!(vec_max_abs_diff(&result.decoded_solution, &b) < 1e-10);
    }

    #[test]
    fn circuit_matches_ideal_on_grid_two_level() {
        // Scaled Pauli-Z with both eigenvalues on-grid at t = pi/2, k = 4:
        // +-0.5 rounds to grid indices 2 and 14.
        let a = HermitianMatrix::from_diagonal(&[0.5, -0.5]).unwrap();
        let b = real_vec(&[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2]);
        let config = HhlConfig::new(FRAC_PI_2, 4, 0.0).unwrap();
        let circuit = hhl_circuit(&a, &b, &config).unwrap();
        let ideal = hhl_ideal(&a, &b, &config).unwrap();
        assert!(
            phase_free_distance(
                circuit.solution_state.amplitudes(),
                ideal.solution_state.amplitudes()
            ) < 1e-6
        );
        assert!((circuit.success_probability - ideal.success_probability).abs() < 1e-6);
        assert!(vec_max_abs_diff(&circuit.decoded_solution, &ideal.decoded_solution) < 1e-6);
    }

    #[test]
    fn circuit_matches_ideal_on_random_on_grid_instances() {
        let mut rng = rng_from_seed(4);
        let t = 0.8;
        let k = 5u32;
        for _ in 0..3 {
            let spectrum = synth::on_grid_spectrum(4, k, t, &mut rng);
            let (a, _) = synth::hermitian_with_spectrum(&spectrum, &mut rng);
            let b = synth::random_unit_vector(4, &mut rng);
            let config = HhlConfig::new(t, k, 0.0).unwrap();
            let circuit = hhl_circuit(&a, &b, &config).unwrap();
            let ideal = hhl_ideal(&a, &b, &config).unwrap();
            assert!(
                phase_free_distance(
                    circuit.solution_state.amplitudes(),
                    ideal.solution_state.amplitudes()
                ) < 1e-6
            );
            assert!((circuit.success_probability - ideal.success_probability).abs() < 1e-6);
        }
    }

    #[test]
    fn circuit_readout_sharpens_with_clock_size() {
        // Off-grid two-level instance: refining the clock register must
        // bring the solver closer to the true normalized solution.
        //
        // The rotation constant is pinned below the smallest eigenvalue.
        // With the default (the largest valid value, sitting exactly at
        // the smallest decoded eigenvalue), the rotation cutoff slices
        // that mode's off-grid readout lobe in half — grid values just
        // below the eigenvalue are skipped while values just above are
        // inverted — an O(1) distortion that oscillates with the
        // fractional grid offset instead of shrinking. A constant clear
        // of both eigenvalues keeps every significant readout value
        // invertible, and then each extra pair of qubits shrinks the
        // leakage error. Consecutive sizes still oscillate (tail
        // interference depends on where each eigenphase lands between
        // grid points), so the comparison is k against k + 4.
        let mut rng = rng_from_seed(5);
        let (a, _) = synth::hermitian_with_spectrum(&[0.9, 0.37], &mut rng);
        let b = synth::random_unit_vector(2, &mut rng);
        let x = thresholded_solve(&a, &b, 0.0).unwrap();
        let x_norm = vec_norm(&x);
        let x_hat: Vec<Complex64> = x.iter().map(|z| z / x_norm).collect();
        let t = 0.9 * PI / 0.9;
        let errors: Vec<f64> = (3u32..=10)
            .map(|k| {
                let config = HhlConfig::new(t, k, 0.0)
                    .unwrap()
                    .with_rotation_constant(0.2);
                let result = hhl_circuit(&a, &b, &config).unwrap();
                phase_free_distance(result.solution_state.amplitudes(), &x_hat)
            })
            .collect();
        for i in 0..4 {
            assert!(
                errors[i + 4] < errors[i] / 3.0,
                "four extra clock qubits should cut the error several-fold: {errors:?}"
            );
        }
        assert!(errors[7] < 1e-4, "finest grid too coarse: {errors:?}");
    }

    #[test]
    fn weightless_solution_reports_failed_postselection() {
        // b sits entirely on the zero eigenvalue, which is invisible to
        // the readout: the ancilla branch carrying the solution has
        // exactly zero amplitude in both models.
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let b = real_vec(&[0.0, 1.0]);
        let config = HhlConfig::new(FRAC_PI_2, 3, 0.0).unwrap();
        assert!(matches!(
            hhl_ideal(&a, &b, &config),
            Err(Error::PostselectionFailed { .. })
        ));
        match hhl_circuit(&a, &b, &config) {
            Err(Error::PostselectionFailed { probability }) => assert!(probability < 1e-12),
            other => panic!("expected postselection failure, got {other:?}"),
        }
    }

    #[test]
    fn rescaling_scales_eigenvalues_and_keeps_eigenvectors() {
        let mut rng = rng_from_seed(6);
        let a = synth::random_hermitian(3, &mut rng);
        assert!(rescale_operator(&a, 1.0)
            .unwrap()
            .matrix()
            .max_abs_diff(a.matrix())
            < 1e-15);
        let scaled = rescale_operator(&a, 0.25).unwrap();
        let dec_a = eig_hermitian(&a).unwrap();
        let dec_s = eig_hermitian(&scaled).unwrap();
        for j in 0..3 {
            assert!((dec_s.eigenvalues[j] - 0.25 * dec_a.eigenvalues[j]).abs() < 1e-12);
            // Same eigenvector up to phase.
            let overlap = inner(&dec_a.eigenvector(j), &dec_s.eigenvector(j)).norm();
            assert!((overlap - 1.0).abs() < 1e-8);
        }
        assert!(rescale_operator(&a, 0.0).is_err());
        assert!(rescale_operator(&a, -2.0).is_err());
    }

    #[test]
    fn rescaled_systems_solve_to_the_same_direction() {
        // Solving (A, b) at time tau equals solving (sA, b) at time tau/s
        // after normalization: the readout phases coincide.
        let mut rng = rng_from_seed(7);
        let spectrum = [1.0, -0.6, 0.4, 0.25];
        let (a, _) = synth::hermitian_with_spectrum(&spectrum, &mut rng);
        let b = synth::random_unit_vector(4, &mut rng);
        let tau = 0.9 * PI;
        let s = 4.0;
        let result_base = hhl_ideal(&a, &b, &HhlConfig::new(tau, 6, 0.0).unwrap()).unwrap();
        let scaled = rescale_operator(&a, s).unwrap();
        let result_scaled =
            hhl_ideal(&scaled, &b, &HhlConfig::new(tau / s, 6, 0.0).unwrap()).unwrap();
        let diff = vec_norm(&vec_sub(
            result_base.solution_state.amplitudes(),
            result_scaled.solution_state.amplitudes(),
        ));
        assert!(diff < 1e-10, "directions diverged by {diff}");
        // Magnitudes scale inversely with s.
        assert!(
            (result_base.z_tilde / result_scaled.z_tilde - s * s).abs() < 1e-6 * s * s,
            "norm model did not scale as 1/s"
        );
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        assert!(HhlConfig::new(0.0, 4, 0.0).is_err());
        assert!(HhlConfig::new(1.0, 0, 0.0).is_err());
        assert!(HhlConfig::new(1.0, 4, -0.1).is_err());
        let base = HhlConfig::new(1.0, 4, 0.0).unwrap();
        assert!(base.with_rotation_constant(0.0).validate().is_err());
        assert!(base.with_rotation_constant(f64::INFINITY).validate().is_err());
    }

    #[test]
    fn zero_right_hand_side_is_rejected() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 1.0]).unwrap();
        let b = vec![c64(0.0, 0.0); 2];
        let config = identity_config(3);
        assert!(matches!(hhl_ideal(&a, &b, &config), Err(Error::ZeroState)));
        assert!(matches!(hhl_circuit(&a, &b, &config), Err(Error::ZeroState)));
    }
}
