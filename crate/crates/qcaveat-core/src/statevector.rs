//! Dense statevector simulator with named registers.
//!
//! Conventions, fixed once and used everywhere:
//! * Qubit 0 is the most significant bit of the basis index, so a register
//!   occupying positions `[s, s+w)` reads out of index `i` as
//!   `(i >> (n - s - w)) & (2^w - 1)`.
//! * States are dense `Vec<Complex64>` of length `2^n`, capped at
//!   [`MAX_QUBITS`] qubits.
//! * All randomness is supplied by the caller.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, CMatrix};

/// Hard cap on total qubits (32 MiB of amplitudes); plenty for every
/// pipeline in this crate while keeping mistakes cheap.
pub const MAX_QUBITS: usize = 22;

/// Max-norm tolerance for accepting an operator as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// How far a prepared state's norm may sit from 1 before preparation is
/// refused instead of silently renormalized.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Postselection probabilities below this are treated as "the branch does
/// not exist".
pub const POSTSELECT_FLOOR: f64 = 1e-12;

/// Ordered, named partition of the qubit line into registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    entries: Vec<(String, usize)>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(registers: &[(&str, usize)]) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::BadLayout("layout needs at least one register".into()));
        }
        let mut entries = Vec::with_capacity(registers.len());
        let mut total = 0usize;
        for (name, width) in registers {
            if name.is_empty() {
                return Err(Error::BadLayout("register names must be nonempty".into()));
            }
            if *width == 0 {
                return Err(Error::BadLayout(format!("register '{name}' has width 0")));
            }
            if entries.iter().any(|(n, _)| n == name) {
                return Err(Error::BadLayout(format!("duplicate register '{name}'")));
            }
            entries.push((name.to_string(), *width));
            total += width;
        }
        if total > MAX_QUBITS {
            return Err(Error::QubitCapExceeded {
                requested: total,
                cap: MAX_QUBITS,
            });
        }
        Ok(RegisterLayout { entries, total })
    }

    pub fn qubits(&self) -> usize {
        self.total
    }

    pub fn dim(&self) -> usize {
        1usize << self.total
    }

    pub fn entries(&self) -> &[(String, usize)] {
        &self.entries
    }

    /// (start position, width) of a named register.
    pub fn locate(&self, name: &str) -> Result<(usize, usize)> {
        let mut start = 0usize;
        for (reg, width) in &self.entries {
            if reg == name {
                return Ok((start, *width));
            }
            start += width;
        }
        Err(Error::UnknownRegister(name.to_string()))
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        self.locate(name).map(|(_, w)| w)
    }

    /// Number of basis states of a register.
    pub fn register_dim(&self, name: &str) -> Result<usize> {
        Ok(1usize << self.width(name)?)
    }

    /// Value the register holds inside a full basis index.
    pub fn value_of(&self, index: usize, name: &str) -> Result<usize> {
        let (start, width) = self.locate(name)?;
        let shift = self.total - start - width;
        Ok((index >> shift) & ((1usize << width) - 1))
    }

    /// The basis index with the register's bits replaced by `value`.
    pub fn with_value(&self, index: usize, name: &str, value: usize) -> Result<usize> {
        let (start, width) = self.locate(name)?;
        let size = 1usize << width;
        if value >= size {
            return Err(Error::OutcomeOutOfRange {
                register: name.to_string(),
                outcome: value,
                size,
            });
        }
        let shift = self.total - start - width;
        let cleared = index & !(((size - 1) as usize) << shift);
        Ok(cleared | (value << shift))
    }
}

/// Exact marginal distribution over one register's values.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub register: String,
    pub probabilities: Vec<f64>,
}

impl ProbabilityTable {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probabilities.get(outcome).copied().unwrap_or(0.0)
    }

    /// First index attaining the maximum probability.
    pub fn argmax(&self) -> usize {
        let mut best = 0usize;
        let mut best_p = f64::NEG_INFINITY;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if p > best_p {
                best_p = p;
                best = i;
            }
        }
        best
    }

    /// Draw `shots` outcomes by inverting the cumulative distribution,
    /// one uniform variate per shot.
    pub fn sample<R: Rng>(&self, shots: usize, rng: &mut R) -> Vec<usize> {
        let mut cumulative = Vec::with_capacity(self.probabilities.len());
        let mut acc = 0.0;
        for &p in &self.probabilities {
            acc += p.max(0.0);
            cumulative.push(acc);
        }
        let total = acc;
        (0..shots)
            .map(|_| {
                let u = rng.gen::<f64>() * total;
                match cumulative.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
                    Ok(i) | Err(i) => i.min(self.probabilities.len() - 1),
                }
            })
            .collect()
    }
}

/// Outcome of a destructive measurement of one register.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub register: String,
    pub outcome: usize,
    /// Probability the sampled outcome had before the collapse.
    pub probability: f64,
    /// Renormalized state after projecting onto the outcome.
    pub post_state: QuantumState,
}

/// Pure state over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// |0...0> over the layout.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amps[0] = Complex64::new(1.0, 0.0);
        QuantumState { layout, amps }
    }

    /// Full amplitude vector; must have length `2^n` and norm within
    /// [`NORM_TOLERANCE`] of 1 (it is then renormalized exactly).
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                got: amps.len(),
            });
        }
        let norm = vec_norm(&amps);
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        let amps = amps.into_iter().map(|z| z / norm).collect();
        Ok(QuantumState { layout, amps })
    }

    /// Product state: the named register holds `state` (normalized within
    /// [`NORM_TOLERANCE`]), every other register holds |0>.
    pub fn with_register_state(
        layout: RegisterLayout,
        name: &str,
        state: &[Complex64],
    ) -> Result<Self> {
        let dim = layout.register_dim(name)?;
        if state.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: state.len(),
            });
        }
        let norm = vec_norm(state);
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        for (v, &a) in state.iter().enumerate() {
            let idx = layout.with_value(0, name, v)?;
            amps[idx] = a / norm;
        }
        Ok(QuantumState { layout, amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Raw mutable access for operator implementations layered on top of
    /// this module; callers are responsible for keeping the norm at 1.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    /// Iterate over the fibers of a register: every basis index splits as
    /// `base | (v << shift)` with `v` the register value. Returns
    /// (shift, list of base indices).
    fn fibers(&self, name: &str) -> Result<(usize, usize, Vec<usize>)> {
        let (start, width) = self.layout.locate(name)?;
        let n = self.layout.qubits();
        let shift = n - start - width;
        let rest_bits = n - width;
        let low_mask = (1usize << shift) - 1;
        let bases = (0..(1usize << rest_bits))
            .map(|r| ((r >> shift) << (shift + width)) | (r & low_mask))
            .collect();
        Ok((shift, width, bases))
    }

    /// Apply a unitary to one register (acting as identity elsewhere).
    pub fn apply_unitary(&mut self, name: &str, u: &CMatrix) -> Result<()> {
        let dim = self.layout.register_dim(name)?;
        if u.rows() != dim || u.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: u.rows(),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        let (shift, _, bases) = self.fibers(name)?;
        let mut fiber = vec![Complex64::new(0.0, 0.0); dim];
        for base in bases {
            for v in 0..dim {
                fiber[v] = self.amps[base | (v << shift)];
            }
            let image = u.mul_vec(&fiber);
            for v in 0..dim {
                self.amps[base | (v << shift)] = image[v];
            }
        }
        Ok(())
    }

    /// Apply `U^y` to the target register, where `y` is the value of the
    /// control register: bit `j` of the control (most significant first)
    /// controls `U^(2^(w-1-j))`. Powers are built by repeated squaring.
    pub fn apply_controlled_power(
        &mut self,
        control: &str,
        target: &str,
        u: &CMatrix,
    ) -> Result<()> {
        let target_dim = self.layout.register_dim(target)?;
        if u.rows() != target_dim || u.cols() != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                got: u.rows(),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        let (c_start, c_width) = self.layout.locate(control)?;
        let n = self.layout.qubits();
        let (shift, _, bases) = self.fibers(target)?;

        let mut power = u.clone();
        let mut fiber = vec![Complex64::new(0.0, 0.0); target_dim];
        // Walk control bits from least significant (applies U^1) upward.
        for j in (0..c_width).rev() {
            let control_shift = n - 1 - (c_start + j);
            for &base in &bases {
                if (base >> control_shift) & 1 == 0 {
                    continue;
                }
                for v in 0..target_dim {
                    fiber[v] = self.amps[base | (v << shift)];
                }
                let image = power.mul_vec(&fiber);
                for v in 0..target_dim {
                    self.amps[base | (v << shift)] = image[v];
                }
            }
            if j > 0 {
                power = power.mul(&power);
            }
        }
        Ok(())
    }

    /// Fourier transform on one register:
    /// `|x> -> N^{-1/2} sum_y exp(+2 pi i x y / N) |y>`.
    pub fn qft(&mut self, name: &str) -> Result<()> {
        self.fourier(name, 1.0)
    }

    /// Inverse Fourier transform on one register (sign -1 kernel).
    pub fn inverse_qft(&mut self, name: &str) -> Result<()> {
        self.fourier(name, -1.0)
    }

    fn fourier(&mut self, name: &str, sign: f64) -> Result<()> {
        let dim = self.layout.register_dim(name)?;
        let (shift, _, bases) = self.fibers(name)?;
        let scale = 1.0 / (dim as f64).sqrt();
        let mut fiber = vec![Complex64::new(0.0, 0.0); dim];
        for base in bases {
            for v in 0..dim {
                fiber[v] = self.amps[base | (v << shift)];
            }
            fft_radix2(&mut fiber, sign);
            for v in 0..dim {
                self.amps[base | (v << shift)] = fiber[v] * scale;
            }
        }
        Ok(())
    }

    /// Exact marginal distribution of one register.
    pub fn measure(&self, name: &str) -> Result<ProbabilityTable> {
        let dim = self.layout.register_dim(name)?;
        let mut probabilities = vec![0.0f64; dim];
        for (i, a) in self.amps.iter().enumerate() {
            probabilities[self.layout.value_of(i, name)?] += a.norm_sqr();
        }
        Ok(ProbabilityTable {
            register: name.to_string(),
            probabilities,
        })
    }

    /// Project onto `register == outcome` and renormalize. Returns the
    /// branch probability together with the post-measurement state.
    pub fn project_register(&self, name: &str, outcome: usize) -> Result<(f64, QuantumState)> {
        let dim = self.layout.register_dim(name)?;
        if outcome >= dim {
            return Err(Error::OutcomeOutOfRange {
                register: name.to_string(),
                outcome,
                size: dim,
            });
        }
        let mut prob = 0.0f64;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if self.layout.value_of(i, name)? == outcome {
                prob += a.norm_sqr();
                amps[i] = a;
            }
        }
        if prob < POSTSELECT_FLOOR {
            return Err(Error::PostselectionFailed { probability: prob });
        }
        let scale = prob.sqrt();
        for a in &mut amps {
            *a /= scale;
        }
        Ok((
            prob,
            QuantumState {
                layout: self.layout.clone(),
                amps,
            },
        ))
    }

    /// Sample one outcome of the register and collapse onto it.
    pub fn measure_collapse<R: Rng>(&self, name: &str, rng: &mut R) -> Result<MeasurementRecord> {
        let table = self.measure(name)?;
        let outcome = table.sample(1, rng)[0];
        let (probability, post_state) = self.project_register(name, outcome)?;
        Ok(MeasurementRecord {
            register: name.to_string(),
            outcome,
            probability,
            post_state,
        })
    }

    /// Extract the pure state held by one register. Requires the state to
    /// be a product between this register and the rest: all amplitude
    /// weight must sit over a single value of the remaining registers
    /// (leakage above 1e-10 is an error, not a warning).
    pub fn register_state(&self, name: &str) -> Result<Vec<Complex64>> {
        let dim = self.layout.register_dim(name)?;
        let (shift, _, bases) = self.fibers(name)?;
        let mut best_base = 0usize;
        let mut best_weight = -1.0f64;
        let mut total = 0.0f64;
        for &base in &bases {
            let w: f64 = (0..dim)
                .map(|v| self.amps[base | (v << shift)].norm_sqr())
                .sum();
            total += w;
            if w > best_weight {
                best_weight = w;
                best_base = base;
            }
        }
        if total - best_weight > 1e-10 {
            return Err(Error::precondition(format!(
                "register '{name}' is entangled with the rest of the state \
                 (leaked weight {:.3e})",
                total - best_weight
            )));
        }
        let fiber: Vec<Complex64> = (0..dim)
            .map(|v| self.amps[best_base | (v << shift)])
            .collect();
        let norm = vec_norm(&fiber);
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(fiber.into_iter().map(|z| z / norm).collect())
    }
}

/// In-place radix-2 FFT with kernel `exp(sign * 2 pi i x y / N)`,
/// unnormalized. Twiddles are computed by direct `from_polar` per
/// butterfly for accuracy.
fn fft_radix2(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2usize;
    while len <= n {
        let ang = sign * TAU / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = Complex64::from_polar(1.0, ang * k as f64);
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}
