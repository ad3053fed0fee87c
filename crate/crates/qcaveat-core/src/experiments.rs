//! Named, reproducible numerical scenarios behind a small registry.
//!
//! Each scenario is a deterministic parameter sweep over the solver,
//! estimator, or cost-model layers that returns a rectangular table of
//! numbers ready for CSV or JSON output. Scenarios are looked up by
//! name, carry typed parameters with defaults, and derive every random
//! stream from the caller's seed, so a run is fully determined by
//! `(scenario, parameters, seed)` — the thread count only changes how
//! the work is scheduled, never the numbers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::errorlab::{counting_cost, error_report, hhl_cost, CostModel, CostVariant};
use crate::hhl::{hhl_ideal, HhlConfig};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::qml::{classification_distance, trace_estimate, Dataset};
use crate::qpe::{choose_time_scale, BoundChoice, TimeScalePolicy};
use crate::rng::{mix_seed, mix_seed2, rng_from_seed};
use crate::synth::{hermitian_with_spectrum, random_spectrum, random_unit_vector};

// Per-scenario stream salts: any two scenarios (and any two streams
// inside one scenario) see uncorrelated draws even for the same seed.
const GRID_INSTANCE_SALT: u64 = 0x6772_6964_696e_7374;
const TRACE_DIAG_SALT: u64 = 0x7472_6365_6469_6167;
const TRACE_SHOT_SALT: u64 = 0x7472_6365_7368_6f74;

// ---------------------------------------------------------------------------
// Typed parameters.
// ---------------------------------------------------------------------------

/// The four parameter shapes a scenario can declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParamKind {
    Float,
    Int,
    Floats,
    Ints,
}

/// One parameter value, matching its declared [`ParamKind`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ParamValue {
    Float(f64),
    Int(u64),
    Floats(Vec<f64>),
    Ints(Vec<u64>),
}

impl ParamValue {
    pub fn kind(&self) -> ParamKind {
        match self {
            ParamValue::Float(_) => ParamKind::Float,
            ParamValue::Int(_) => ParamKind::Int,
            ParamValue::Floats(_) => ParamKind::Floats,
            ParamValue::Ints(_) => ParamKind::Ints,
        }
    }

    /// Parse a textual value against an expected kind. List kinds split
    /// on commas; every token must parse and lists must be non-empty.
    pub fn parse(kind: ParamKind, text: &str) -> Result<ParamValue> {
        fn float_token(tok: &str) -> Result<f64> {
            let tok = tok.trim();
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("bad number {tok:?}: {e}")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("number {tok:?} is not finite")));
            }
            Ok(v)
        }
        fn int_token(tok: &str) -> Result<u64> {
            let tok = tok.trim();
            tok.parse()
                .map_err(|e| Error::Parse(format!("bad integer {tok:?}: {e}")))
        }
        let text = text.trim();
        match kind {
            ParamKind::Float => Ok(ParamValue::Float(float_token(text)?)),
            ParamKind::Int => Ok(ParamValue::Int(int_token(text)?)),
            ParamKind::Floats => {
                let vals: Vec<f64> = text
                    .split(',')
                    .map(float_token)
                    .collect::<Result<Vec<f64>>>()?;
                if vals.is_empty() {
                    return Err(Error::Parse("empty list".to_string()));
                }
                Ok(ParamValue::Floats(vals))
            }
            ParamKind::Ints => {
                let vals: Vec<u64> = text
                    .split(',')
                    .map(int_token)
                    .collect::<Result<Vec<u64>>>()?;
                if vals.is_empty() {
                    return Err(Error::Parse("empty list".to_string()));
                }
                Ok(ParamValue::Ints(vals))
            }
        }
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Floats(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| format!("{v}")).collect();
                write!(f, "{}", parts.join(","))
            }
            ParamValue::Ints(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| format!("{v}")).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

/// Declaration of one scenario parameter: name, kind, default, and a
/// one-line description.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: ParamValue,
    pub help: &'static str,
}

type ParamMap = BTreeMap<String, ParamValue>;
type Runner = fn(&ParamMap, u64, usize) -> Result<ResultTable>;

/// One registered scenario: metadata plus its runner.
#[derive(Debug)]
pub struct ScenarioDef {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamSpec>,
    runner: Runner,
}

/// A named experiment request: which scenario, any parameter overrides,
/// the seed, and how many worker threads may be used.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario: String,
    pub params: ParamMap,
    pub seed: u64,
    pub threads: usize,
}

// ---------------------------------------------------------------------------
// Result tables.
// ---------------------------------------------------------------------------

/// Rectangular numeric output of a scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> ResultTable {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    /// Extract one column by name.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::precondition(format!("no column named {name:?}")))?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Comma-separated rendering: header line, then one line per row,
    /// floats printed in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Pretty JSON rendering of the whole table.
    pub fn to_json(&self) -> Result<String> {
        crate::serialize::to_json_string(self)
    }
}

// ---------------------------------------------------------------------------
// Shared numeric helpers.
// ---------------------------------------------------------------------------

/// Least-squares slope of `ln y` against `ln x`; the exponent `p` when
/// the data follow `y = c x^p`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::precondition(
            "slope needs at least two points".to_string(),
        ));
    }
    for &v in xs.iter().chain(ys) {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::precondition(format!(
                "log-log slope needs positive finite data, got {v}"
            )));
        }
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return Err(Error::precondition(
            "log-log slope needs at least two distinct x values".to_string(),
        ));
    }
    Ok(num / den)
}

/// Apply `f` to every index in `0..count`, optionally on several worker
/// threads, and return results in index order. `f(i)` must depend only
/// on `i`, so the output is byte-identical for every thread count; on
/// failure the error with the smallest index is returned.
pub fn map_indexed<T, F>(count: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    if threads == 0 {
        return Err(Error::precondition(
            "thread count must be at least 1".to_string(),
        ));
    }
    let workers = threads.min(count.max(1));
    if workers <= 1 {
        return (0..count).map(f).collect();
    }
    let worker_outputs: Vec<Vec<(usize, Result<T>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut i = w;
                    while i < count {
                        out.push((i, f(i)));
                        i += workers;
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    let mut slots: Vec<Option<Result<T>>> = Vec::new();
    slots.resize_with(count, || None);
    for out in worker_outputs {
        for (i, r) in out {
            slots[i] = Some(r);
        }
    }
    slots
        .into_iter()
        .map(|slot| slot.expect("every index is visited by exactly one worker"))
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

// ---------------------------------------------------------------------------
// Parameter access helpers (used by runners after validation/merging).
// ---------------------------------------------------------------------------

fn float_param(params: &ParamMap, key: &str) -> Result<f64> {
    match params.get(key) {
        Some(ParamValue::Float(v)) => Ok(*v),
        other => Err(Error::precondition(format!(
            "internal: parameter {key:?} missing or mistyped after validation ({other:?})"
        ))),
    }
}

fn int_param(params: &ParamMap, key: &str) -> Result<u64> {
    match params.get(key) {
        Some(ParamValue::Int(v)) => Ok(*v),
        other => Err(Error::precondition(format!(
            "internal: parameter {key:?} missing or mistyped after validation ({other:?})"
        ))),
    }
}

fn floats_param(params: &ParamMap, key: &str) -> Result<Vec<f64>> {
    match params.get(key) {
        Some(ParamValue::Floats(v)) => Ok(v.clone()),
        other => Err(Error::precondition(format!(
            "internal: parameter {key:?} missing or mistyped after validation ({other:?})"
        ))),
    }
}

fn ints_param(params: &ParamMap, key: &str) -> Result<Vec<u64>> {
    match params.get(key) {
        Some(ParamValue::Ints(v)) => Ok(v.clone()),
        other => Err(Error::precondition(format!(
            "internal: parameter {key:?} missing or mistyped after validation ({other:?})"
        ))),
    }
}

fn bad_param(key: &str, message: impl Into<String>) -> Error {
    Error::BadParameter {
        key: key.to_string(),
        message: message.into(),
    }
}

fn require_positive_floats(key: &str, values: &[f64]) -> Result<()> {
    for &v in values {
        if !(v > 0.0) || !v.is_finite() {
            return Err(bad_param(
                key,
                format!("every entry must be positive and finite, got {v}"),
            ));
        }
    }
    Ok(())
}

fn require_positive_float(key: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(bad_param(key, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Registry and dispatch.
// ---------------------------------------------------------------------------

/// All registered scenarios, sorted by name.
pub fn scenarios() -> &'static [ScenarioDef] {
    static REGISTRY: OnceLock<Vec<ScenarioDef>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry).as_slice()
}

/// Look a scenario up by name.
pub fn find_scenario(name: &str) -> Result<&'static ScenarioDef> {
    scenarios()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Validate an experiment request against its scenario's declaration,
/// merge defaults, and run it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    let def = find_scenario(&spec.scenario)?;
    if spec.threads == 0 {
        return Err(Error::precondition(
            "thread count must be at least 1".to_string(),
        ));
    }
    for (key, value) in &spec.params {
        let declared = def
            .params
            .iter()
            .find(|p| p.name == key)
            .ok_or_else(|| Error::UnknownParameter {
                scenario: def.name.to_string(),
                key: key.clone(),
            })?;
        if value.kind() != declared.kind {
            return Err(bad_param(
                key,
                format!("expected {:?}, got {:?}", declared.kind, value.kind()),
            ));
        }
        match value {
            ParamValue::Float(v) => {
                if !v.is_finite() {
                    return Err(bad_param(key, format!("must be finite, got {v}")));
                }
            }
            ParamValue::Floats(vs) => {
                if vs.is_empty() {
                    return Err(bad_param(key, "list must not be empty"));
                }
                if let Some(v) = vs.iter().find(|v| !v.is_finite()) {
                    return Err(bad_param(key, format!("must be finite, got {v}")));
                }
            }
            ParamValue::Ints(vs) => {
                if vs.is_empty() {
                    return Err(bad_param(key, "list must not be empty"));
                }
            }
            ParamValue::Int(_) => {}
        }
    }
    let mut merged: ParamMap = def
        .params
        .iter()
        .map(|p| (p.name.to_string(), p.default.clone()))
        .collect();
    for (key, value) in &spec.params {
        merged.insert(key.clone(), value.clone());
    }
    (def.runner)(&merged, spec.seed, spec.threads)
}

fn build_registry() -> Vec<ScenarioDef> {
    let defs = vec![
        ScenarioDef {
            name: "classification_z_scaling",
            summary: "Distance-estimate error against the state-norm energy Z at a fixed \
                      success probability; the sampled probability error is amplified by Z^2, \
                      so the mean error grows with the exact exponent 2.",
            params: vec![
                ParamSpec {
                    name: "z_values",
                    kind: ParamKind::Floats,
                    default: ParamValue::Floats(vec![0.25, 0.5, 1.0, 2.0]),
                    help: "norm energies Z to sweep; instances are built so the sampled \
                           probability is the same at every Z",
                },
                ParamSpec {
                    name: "p_fixed",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.1),
                    help: "rescaled post-selection probability held fixed across the sweep",
                },
                ParamSpec {
                    name: "shots",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(10_000),
                    help: "samples per probability estimate",
                },
                ParamSpec {
                    name: "trials",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(50),
                    help: "independent repetitions averaged per Z; repetition seeds are \
                           shared across Z values so the sweep is exactly paired",
                },
                ParamSpec {
                    name: "t",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.05),
                    help: "small-angle preparation parameter",
                },
            ],
            runner: run_classification_z_scaling,
        },
        ScenarioDef {
            name: "counting_relative_error",
            summary: "Cost of counting K marked items among N to fixed relative error, next \
                      to the cost of pinning the absolute count, which crosses over to \
                      sqrt(N K).",
            params: vec![
                ParamSpec {
                    name: "n_items",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(1024),
                    help: "total number of items N",
                },
                ParamSpec {
                    name: "k_values",
                    kind: ParamKind::Ints,
                    default: ParamValue::Ints(vec![4, 16, 64]),
                    help: "marked counts K to sweep",
                },
                ParamSpec {
                    name: "epsilon_fixed",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.0625),
                    help: "fixed relative error for the first cost column",
                },
            ],
            runner: run_counting_relative_error,
        },
        ScenarioDef {
            name: "grid_refinement",
            summary: "Mean normalized solution error of the thresholded inversion as the \
                      readout register grows one qubit at a time; each extra qubit halves \
                      the readout grid spacing and with it the mean error.",
            params: vec![
                ParamSpec {
                    name: "clocks",
                    kind: ParamKind::Ints,
                    default: ParamValue::Ints(vec![4, 5, 6, 7, 8]),
                    help: "readout register sizes to sweep",
                },
                ParamSpec {
                    name: "instances",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(16),
                    help: "random instances averaged per register size",
                },
                ParamSpec {
                    name: "dim",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(4),
                    help: "system dimension of each random instance",
                },
            ],
            runner: run_grid_refinement,
        },
        ScenarioDef {
            name: "lowrank_time_scale",
            summary: "Inversion cost when the evolution time must shrink like 1/M with the \
                      data-set size M at fixed model dimension; each 4x in M multiplies the \
                      cost by exactly 16.",
            params: vec![
                ParamSpec {
                    name: "m_values",
                    kind: ParamKind::Ints,
                    default: ParamValue::Ints(vec![4, 16, 64]),
                    help: "data-set sizes M driving the evolution time t = 1/M",
                },
                ParamSpec {
                    name: "dim",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(16),
                    help: "model dimension entering the logarithmic factor (held fixed)",
                },
                ParamSpec {
                    name: "sparseness",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(1.0),
                    help: "sparseness parameter of the evolution",
                },
                ParamSpec {
                    name: "lambda_min",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.5),
                    help: "smallest kept eigenvalue magnitude",
                },
                ParamSpec {
                    name: "epsilon",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.01),
                    help: "simulation accuracy",
                },
            ],
            runner: run_lowrank_time_scale,
        },
        ScenarioDef {
            name: "mu_sweep",
            summary: "Effect of the eigenvalue threshold on a fixed diagonal instance: kept \
                      modes fall, discarded weight and residual rise, and the rotation \
                      constant tracks the smallest kept eigenvalue.",
            params: vec![ParamSpec {
                name: "mu_values",
                kind: ParamKind::Floats,
                default: ParamValue::Floats(vec![0.0, 0.3, 0.6, 0.9]),
                help: "thresholds to sweep over the spectrum {1, 0.75, 0.5, 0.25}",
            }],
            runner: run_mu_sweep,
        },
        ScenarioDef {
            name: "norm_amplification",
            summary: "Solution norm and classical solution error as the right-hand side is \
                      rescaled: both grow with exact exponent 1 while the normalized state \
                      error stays fixed.",
            params: vec![
                ParamSpec {
                    name: "scales",
                    kind: ParamKind::Floats,
                    default: ParamValue::Floats(vec![1.0, 10.0, 100.0]),
                    help: "right-hand-side rescaling factors",
                },
                ParamSpec {
                    name: "dim",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(4),
                    help: "system dimension of the random instance",
                },
                ParamSpec {
                    name: "clock_qubits",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(6),
                    help: "readout register size",
                },
            ],
            runner: run_norm_amplification,
        },
        ScenarioDef {
            name: "t_sweep",
            summary: "Time-rescaled inversion cost as the evolution time shrinks by powers \
                      of two; halving t multiplies the cost by exactly 4.",
            params: vec![
                ParamSpec {
                    name: "t_base",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(1.0),
                    help: "base evolution time",
                },
                ParamSpec {
                    name: "factors",
                    kind: ParamKind::Floats,
                    default: ParamValue::Floats(vec![1.0, 0.5, 0.25]),
                    help: "multipliers applied to the base time",
                },
                ParamSpec {
                    name: "sparseness",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(1.0),
                    help: "sparseness parameter of the evolution",
                },
                ParamSpec {
                    name: "lambda_min",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.5),
                    help: "smallest kept eigenvalue magnitude",
                },
                ParamSpec {
                    name: "epsilon",
                    kind: ParamKind::Float,
                    default: ParamValue::Float(0.01),
                    help: "simulation accuracy",
                },
                ParamSpec {
                    name: "dim",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(16),
                    help: "model dimension entering the logarithmic factor",
                },
            ],
            runner: run_t_sweep,
        },
        ScenarioDef {
            name: "trace_scaling",
            summary: "Median error of the rescaled kernel-trace estimate as the kernel \
                      dimension grows at a fixed shot budget: the rescaled error grows with \
                      exponent 1 while the normalized estimate's error stays flat.",
            params: vec![
                ParamSpec {
                    name: "m_values",
                    kind: ParamKind::Ints,
                    default: ParamValue::Ints(vec![16, 64, 256, 1024]),
                    help: "kernel dimensions M to sweep",
                },
                ParamSpec {
                    name: "trials",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(50),
                    help: "independent kernels per dimension (medians are reported)",
                },
                ParamSpec {
                    name: "shots",
                    kind: ParamKind::Int,
                    default: ParamValue::Int(256),
                    help: "diagonal samples per estimate",
                },
            ],
            runner: run_trace_scaling,
        },
    ];
    debug_assert!(defs.windows(2).all(|w| w[0].name < w[1].name));
    defs
}

// ---------------------------------------------------------------------------
// Runners.
// ---------------------------------------------------------------------------

fn run_norm_amplification(params: &ParamMap, seed: u64, _threads: usize) -> Result<ResultTable> {
    let scales = floats_param(params, "scales")?;
    require_positive_floats("scales", &scales)?;
    let dim = int_param(params, "dim")? as usize;
    if dim < 2 {
        return Err(bad_param("dim", "system dimension must be at least 2"));
    }
    let clock = int_param(params, "clock_qubits")?;
    let clock: u32 = clock
        .try_into()
        .map_err(|_| bad_param("clock_qubits", format!("{clock} does not fit a register size")))?;

    let mut rng = rng_from_seed(seed);
    let spectrum = random_spectrum(dim, 0.25, true, &mut rng);
    let (a, _) = hermitian_with_spectrum(&spectrum, &mut rng);
    let b0 = random_unit_vector(dim, &mut rng);
    let t = choose_time_scale(&a, &TimeScalePolicy::default())?;
    let config = HhlConfig::new(t, clock, 0.0)?;

    let mut table = ResultTable::new(&[
        "scale",
        "b_norm",
        "x_norm",
        "state_error",
        "classical_error",
    ]);
    for &scale in &scales {
        let b: Vec<Complex64> = b0.iter().map(|z| z * scale).collect();
        let result = hhl_ideal(&a, &b, &config)?;
        let report = error_report(&a, &b, &result)?;
        table.push_row(vec![
            scale,
            result.b_norm,
            report.z.sqrt(),
            report.state_error,
            report.classical_error,
        ]);
    }
    Ok(table)
}

fn run_mu_sweep(params: &ParamMap, _seed: u64, _threads: usize) -> Result<ResultTable> {
    let mu_values = floats_param(params, "mu_values")?;
    for &mu in &mu_values {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(bad_param(
                "mu_values",
                format!("thresholds must be nonnegative and finite, got {mu}"),
            ));
        }
    }

    let diag = [1.0, 0.75, 0.5, 0.25];
    let a = HermitianMatrix::new(CMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            Complex64::new(diag[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))?;
    let b = vec![Complex64::new(0.5, 0.0); 4];
    let t = std::f64::consts::FRAC_PI_2;

    let mut table = ResultTable::new(&[
        "mu",
        "kept_modes",
        "discarded_weight",
        "success_probability",
        "residual",
        "rotation_constant",
    ]);
    for &mu in &mu_values {
        let config = HhlConfig::new(t, 4, mu)?;
        let result = hhl_ideal(&a, &b, &config)?;
        let report = error_report(&a, &b, &result)?;
        table.push_row(vec![
            mu,
            result.kept_eigenvalue_count as f64,
            result.discarded_weight,
            result.success_probability,
            report.residual,
            result.rotation_constant,
        ]);
    }
    Ok(table)
}

fn run_grid_refinement(params: &ParamMap, seed: u64, threads: usize) -> Result<ResultTable> {
    let clocks = ints_param(params, "clocks")?;
    let mut clock_sizes: Vec<u32> = Vec::with_capacity(clocks.len());
    for &c in &clocks {
        if c < 2 || c > 16 {
            return Err(bad_param(
                "clocks",
                format!("register sizes must lie in 2..=16, got {c}"),
            ));
        }
        clock_sizes.push(c as u32);
    }
    let instances = int_param(params, "instances")? as usize;
    if instances == 0 {
        return Err(bad_param("instances", "need at least one instance"));
    }
    let dim = int_param(params, "dim")? as usize;
    if dim < 2 {
        return Err(bad_param("dim", "system dimension must be at least 2"));
    }

    // Eigenvalues are drawn with magnitudes in [0.25, 1] and the policy
    // keys the time on the exact spectral radius, so every phase sits
    // well inside the readout range and clear of the zero grid point at
    // every register size in the sweep.
    let policy = TimeScalePolicy {
        bound: BoundChoice::ExactLambdaMax,
        safety: 0.7,
    };
    let per_instance = map_indexed(instances, threads, |i| {
        let mut rng = rng_from_seed(mix_seed2(seed, GRID_INSTANCE_SALT, i as u64));
        let spectrum = random_spectrum(dim, 0.25, true, &mut rng);
        let (a, _) = hermitian_with_spectrum(&spectrum, &mut rng);
        let b = random_unit_vector(dim, &mut rng);
        let t = choose_time_scale(&a, &policy)?;
        let mut errors = Vec::with_capacity(clock_sizes.len());
        for &clock in &clock_sizes {
            let config = HhlConfig::new(t, clock, 0.0)?;
            let result = hhl_ideal(&a, &b, &config)?;
            let report = error_report(&a, &b, &result)?;
            errors.push(report.state_error);
        }
        Ok(errors)
    })?;

    let mut table = ResultTable::new(&["clock_qubits", "grid_points", "mean_state_error"]);
    for (j, &clock) in clock_sizes.iter().enumerate() {
        let errs: Vec<f64> = per_instance.iter().map(|e| e[j]).collect();
        table.push_row(vec![
            clock as f64,
            (1u64 << clock) as f64,
            mean(&errs),
        ]);
    }
    Ok(table)
}

fn run_t_sweep(params: &ParamMap, _seed: u64, _threads: usize) -> Result<ResultTable> {
    let t_base = float_param(params, "t_base")?;
    require_positive_float("t_base", t_base)?;
    let factors = floats_param(params, "factors")?;
    require_positive_floats("factors", &factors)?;
    let s = float_param(params, "sparseness")?;
    require_positive_float("sparseness", s)?;
    let lambda_min = float_param(params, "lambda_min")?;
    require_positive_float("lambda_min", lambda_min)?;
    let epsilon = float_param(params, "epsilon")?;
    require_positive_float("epsilon", epsilon)?;
    let dim = int_param(params, "dim")? as usize;

    let base = CostModel::new(dim)
        .with_sparseness(s)
        .with_lambda_min(lambda_min)
        .with_epsilon(epsilon);
    let cost_base = hhl_cost(&base.with_time_scale(t_base), CostVariant::TimeRescaled)?;

    let mut table = ResultTable::new(&["factor", "time_scale", "cost", "cost_ratio"]);
    for &factor in &factors {
        let t = t_base * factor;
        let cost = hhl_cost(&base.with_time_scale(t), CostVariant::TimeRescaled)?;
        table.push_row(vec![factor, t, cost, cost / cost_base]);
    }
    Ok(table)
}

fn run_trace_scaling(params: &ParamMap, seed: u64, threads: usize) -> Result<ResultTable> {
    let m_values = ints_param(params, "m_values")?;
    for &m in &m_values {
        if m == 0 {
            return Err(bad_param("m_values", "kernel dimensions must be positive"));
        }
    }
    let trials = int_param(params, "trials")? as usize;
    if trials == 0 {
        return Err(bad_param("trials", "need at least one trial"));
    }
    let shots = int_param(params, "shots")?;
    if shots == 0 {
        return Err(bad_param("shots", "need at least one shot"));
    }

    let mut table = ResultTable::new(&["dim", "median_trace_error", "median_normalized_error"]);
    for &m in &m_values {
        let errors = map_indexed(trials, threads, |trial| {
            let g = mix_seed2(seed, m, trial as u64);
            let mut rng = rng_from_seed(mix_seed(g, TRACE_DIAG_SALT));
            let diag: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
            let k = HermitianMatrix::from_diagonal_unbounded(&diag)?;
            let rec = trace_estimate(&k, shots, mix_seed(g, TRACE_SHOT_SALT))?;
            Ok((
                (rec.tr.value - rec.tr.exact).abs(),
                (rec.tr_over_m.value - rec.tr_over_m.exact).abs(),
            ))
        })?;
        let trace_errors: Vec<f64> = errors.iter().map(|e| e.0).collect();
        let normalized_errors: Vec<f64> = errors.iter().map(|e| e.1).collect();
        table.push_row(vec![
            m as f64,
            median(trace_errors),
            median(normalized_errors),
        ]);
    }
    Ok(table)
}

fn run_classification_z_scaling(
    params: &ParamMap,
    seed: u64,
    threads: usize,
) -> Result<ResultTable> {
    let z_values = floats_param(params, "z_values")?;
    require_positive_floats("z_values", &z_values)?;
    let p_fixed = float_param(params, "p_fixed")?;
    require_positive_float("p_fixed", p_fixed)?;
    let shots = int_param(params, "shots")?;
    if shots == 0 {
        return Err(bad_param("shots", "need at least one shot"));
    }
    let trials = int_param(params, "trials")? as usize;
    if trials == 0 {
        return Err(bad_param("trials", "need at least one trial"));
    }
    let t = float_param(params, "t")?;
    require_positive_float("t", t)?;

    let mut table = ResultTable::new(&["z", "distance_exact", "mean_distance_error"]);
    for &z in &z_values {
        // One query point and a one-point cluster engineered so that the
        // squared distance is d = 2 p_fixed z^2, which makes the sampled
        // probability d / (2 z^2) = p_fixed at every z. Trial seeds do
        // not involve z, so each trial draws the identical sample path
        // at every z and the error column scales exactly like z^2.
        let d = 2.0 * p_fixed * z * z;
        if d > z {
            return Err(bad_param(
                "z_values",
                format!(
                    "z = {z} with p_fixed = {p_fixed} needs negative amplitudes; \
                     require 2 * p_fixed * z <= 1"
                ),
            ));
        }
        let r = d.sqrt();
        let s_amp = (2.0 * z - d).sqrt();
        let query_amp = 0.5 * (s_amp + r);
        let cluster_amp = 0.5 * (s_amp - r);
        let u = vec![Complex64::new(query_amp, 0.0)];
        let cluster = Dataset::from_real(&[vec![cluster_amp]])?;
        let errors = map_indexed(trials, threads, |trial| {
            let rec = classification_distance(&u, &cluster, t, shots, mix_seed(seed, trial as u64))?;
            Ok(rec.distance_error_from_p)
        })?;
        table.push_row(vec![z, d, mean(&errors)]);
    }
    Ok(table)
}

fn run_counting_relative_error(
    params: &ParamMap,
    _seed: u64,
    _threads: usize,
) -> Result<ResultTable> {
    let n_items = int_param(params, "n_items")?;
    if n_items == 0 {
        return Err(bad_param("n_items", "need at least one item"));
    }
    let k_values = ints_param(params, "k_values")?;
    let epsilon_fixed = float_param(params, "epsilon_fixed")?;
    require_positive_float("epsilon_fixed", epsilon_fixed)?;

    let n = n_items as f64;
    let mut table = ResultTable::new(&[
        "k_marked",
        "cost_fixed_epsilon",
        "cost_pinned",
        "sqrt_nk",
        "crossover_gap",
    ]);
    for &k in &k_values {
        if k == 0 || k > n_items {
            return Err(bad_param(
                "k_values",
                format!("marked counts must lie in 1..=n_items, got {k}"),
            ));
        }
        let kf = k as f64;
        let cost_fixed = counting_cost(n, kf, epsilon_fixed)?;
        let cost_pinned = counting_cost(n, kf, 1.0 / kf)?;
        let sqrt_nk = (n * kf).sqrt();
        table.push_row(vec![
            kf,
            cost_fixed,
            cost_pinned,
            sqrt_nk,
            (cost_pinned - sqrt_nk).abs(),
        ]);
    }
    Ok(table)
}

fn run_lowrank_time_scale(params: &ParamMap, _seed: u64, _threads: usize) -> Result<ResultTable> {
    let m_values = ints_param(params, "m_values")?;
    for &m in &m_values {
        if m == 0 {
            return Err(bad_param("m_values", "data-set sizes must be positive"));
        }
    }
    let dim = int_param(params, "dim")? as usize;
    let s = float_param(params, "sparseness")?;
    require_positive_float("sparseness", s)?;
    let lambda_min = float_param(params, "lambda_min")?;
    require_positive_float("lambda_min", lambda_min)?;
    let epsilon = float_param(params, "epsilon")?;
    require_positive_float("epsilon", epsilon)?;

    let base = CostModel::new(dim)
        .with_sparseness(s)
        .with_lambda_min(lambda_min)
        .with_epsilon(epsilon);
    let mut cost_base = None;

    let mut table = ResultTable::new(&["data_size", "time_scale", "cost", "cost_ratio"]);
    for &m in &m_values {
        let t = 1.0 / m as f64;
        let cost = hhl_cost(&base.with_time_scale(t), CostVariant::TimeRescaled)?;
        let base_cost = *cost_base.get_or_insert(cost);
        table.push_row(vec![m as f64, t, cost, cost / base_cost]);
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Tests.
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(name: &str) -> ExperimentSpec {
        ExperimentSpec {
            scenario: name.to_string(),
            params: ParamMap::new(),
            seed: 7,
            threads: 1,
        }
    }

    #[test]
    fn registry_is_sorted_and_lookup_works() {
        let defs = scenarios();
        assert_eq!(defs.len(), 8);
        for pair in defs.windows(2) {
            assert!(pair[0].name < pair[1].name, "registry must stay sorted");
        }
        assert_eq!(find_scenario("mu_sweep").unwrap().name, "mu_sweep");
        match find_scenario("no_such_thing") {
            Err(Error::UnknownScenario(name)) => assert_eq!(name, "no_such_thing"),
            other => panic!("expected UnknownScenario, got {other:?}"),
        }
    }

    #[test]
    fn every_default_matches_its_declared_kind() {
        for def in scenarios() {
            for p in &def.params {
                assert_eq!(p.default.kind(), p.kind, "{}: {}", def.name, p.name);
            }
        }
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let mut s = spec("norm_amplification");
        s.params
            .insert("bogus".to_string(), ParamValue::Float(1.0));
        match run_experiment(&s) {
            Err(Error::UnknownParameter { scenario, key }) => {
                assert_eq!(scenario, "norm_amplification");
                assert_eq!(key, "bogus");
            }
            other => panic!("expected UnknownParameter, got {other:?}"),
        }
    }

    #[test]
    fn wrong_parameter_kind_is_rejected() {
        let mut s = spec("norm_amplification");
        s.params.insert("scales".to_string(), ParamValue::Int(3));
        match run_experiment(&s) {
            Err(Error::BadParameter { key, .. }) => assert_eq!(key, "scales"),
            other => panic!("expected BadParameter, got {other:?}"),
        }
    }

    #[test]
    fn zero_threads_are_rejected() {
        let mut s = spec("mu_sweep");
        s.threads = 0;
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn param_value_parses_and_prints_all_kinds() {
        assert_eq!(
            ParamValue::parse(ParamKind::Float, " 0.5 ").unwrap(),
            ParamValue::Float(0.5)
        );
        assert_eq!(
            ParamValue::parse(ParamKind::Int, "42").unwrap(),
            ParamValue::Int(42)
        );
        assert_eq!(
            ParamValue::parse(ParamKind::Floats, "1, 0.5,0.25").unwrap(),
            ParamValue::Floats(vec![1.0, 0.5, 0.25])
        );
        assert_eq!(
            ParamValue::parse(ParamKind::Ints, "4,16,64").unwrap(),
            ParamValue::Ints(vec![4, 16, 64])
        );
        assert!(ParamValue::parse(ParamKind::Float, "abc").is_err());
        assert!(ParamValue::parse(ParamKind::Int, "-3").is_err());
        assert!(ParamValue::parse(ParamKind::Floats, "1,,2").is_err());
        assert_eq!(ParamValue::Floats(vec![1.0, 0.5]).to_string(), "1,0.5");
        assert_eq!(ParamValue::Int(9).to_string(), "9");
    }

    #[test]
    fn log_log_slope_recovers_exact_powers() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let cubes: Vec<f64> = xs.iter().map(|x| x * x * x).collect();
        let slope = log_log_slope(&xs, &cubes).unwrap();
        assert!((slope - 3.0).abs() < 1e-12, "slope {slope}");
        assert!(log_log_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(log_log_slope(&[1.0], &[1.0]).is_err());
        assert!(log_log_slope(&[2.0, 2.0], &[1.0, 3.0]).is_err());
        assert!(log_log_slope(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn map_indexed_preserves_order_and_propagates_errors() {
        let squares = map_indexed(10, 3, |i| Ok(i * i)).unwrap();
        assert_eq!(squares, (0..10).map(|i| i * i).collect::<Vec<_>>());
        let failing = map_indexed(10, 3, |i| {
            if i == 5 {
                Err(Error::precondition("boom".to_string()))
            } else {
                Ok(i)
            }
        });
        match failing {
            Err(Error::Precondition(msg)) => assert!(msg.contains("boom")),
            other => panic!("expected the index-5 error, got {other:?}"),
        }
        assert_eq!(map_indexed(3, 16, Ok).unwrap(), vec![0, 1, 2]);
        let empty: Vec<usize> = map_indexed(0, 4, |_| Ok(0usize)).unwrap();
        assert!(empty.is_empty());
        assert!(map_indexed(4, 0, |i| Ok(i)).is_err());
    }

    #[test]
    fn result_table_columns_and_renderings() {
        let mut table = ResultTable::new(&["a", "b"]);
        table.push_row(vec![1.0, 0.5]);
        table.push_row(vec![2.0, 0.25]);
        assert_eq!(table.column("b").unwrap(), vec![0.5, 0.25]);
        assert!(table.column("c").is_err());
        assert_eq!(table.to_csv(), "a,b\n1,0.5\n2,0.25\n");
        let json = table.to_json().unwrap();
        assert!(json.contains("\"columns\""));
        assert!(json.ends_with('\n'));
    }

    #[test]
    fn norm_amplification_grows_with_exact_exponent_one() {
        let table = run_experiment(&spec("norm_amplification")).unwrap();
        let scales = table.column("scale").unwrap();
        let x_norms = table.column("x_norm").unwrap();
        let classical = table.column("classical_error").unwrap();
        let state = table.column("state_error").unwrap();

        let slope_x = log_log_slope(&scales, &x_norms).unwrap();
        let slope_c = log_log_slope(&scales, &classical).unwrap();
        assert!((slope_x - 1.0).abs() < 1e-6, "x-norm slope {slope_x}");
        assert!((slope_c - 1.0).abs() < 1e-6, "classical-error slope {slope_c}");

        let spread = state.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - state.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-12, "state error must not move: spread {spread}");
        assert!(state[0] > 1e-6, "the instance should be visibly off-grid");
    }

    #[test]
    fn mu_sweep_monotonics_and_exact_weights() {
        let table = run_experiment(&spec("mu_sweep")).unwrap();
        let kept = table.column("kept_modes").unwrap();
        let discarded = table.column("discarded_weight").unwrap();
        let residual = table.column("residual").unwrap();
        let rotation = table.column("rotation_constant").unwrap();

        assert_eq!(kept, vec![4.0, 3.0, 2.0, 1.0]);
        for pair in discarded.windows(2) {
            assert!(pair[0] < pair[1], "discarded weight must rise: {discarded:?}");
        }
        for pair in residual.windows(2) {
            assert!(pair[0] < pair[1], "residual must rise: {residual:?}");
        }
        for pair in rotation.windows(2) {
            assert!(pair[0] < pair[1], "rotation constant must rise: {rotation:?}");
        }
        let expected = [0.0, 0.25, 0.5, 0.75];
        for (got, want) in discarded.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "discarded {got} vs {want}");
        }
        // On this on-grid instance the residual is exactly the root of
        // the discarded weight.
        for (res, disc) in residual.iter().zip(&discarded) {
            assert!((res * res - disc).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_refinement_halves_the_mean_error_per_qubit() {
        let table = run_experiment(&spec("grid_refinement")).unwrap();
        let errors = table.column("mean_state_error").unwrap();
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (4.0 / 3.0..=3.0).contains(&ratio),
                "each qubit should roughly halve the mean error, got ratio {ratio} in {errors:?}"
            );
        }
    }

    #[test]
    fn t_sweep_cost_ratios_are_exact_powers_of_four() {
        let table = run_experiment(&spec("t_sweep")).unwrap();
        let ratios = table.column("cost_ratio").unwrap();
        for (got, want) in ratios.iter().zip([1.0, 4.0, 16.0]) {
            assert!(
                (got - want).abs() < 1e-12,
                "halving t must exactly quadruple the cost: {got} vs {want}"
            );
        }
    }

    #[test]
    fn lowrank_cost_ratios_are_exact_squares_of_m_growth() {
        let table = run_experiment(&spec("lowrank_time_scale")).unwrap();
        let ratios = table.column("cost_ratio").unwrap();
        for (got, want) in ratios.iter().zip([1.0, 16.0, 256.0]) {
            assert!(
                (got - want).abs() < 1e-12,
                "t = 1/M must square the M growth into the cost: {got} vs {want}"
            );
        }
    }

    #[test]
    fn counting_crossover_is_exact_on_square_pairs() {
        let table = run_experiment(&spec("counting_relative_error")).unwrap();
        let gaps = table.column("crossover_gap").unwrap();
        for gap in &gaps {
            assert!(
                gap.abs() < 1e-12,
                "pinning the count must cost exactly sqrt(N K), gap {gap}"
            );
        }
        let fixed = table.column("cost_fixed_epsilon").unwrap();
        for pair in fixed.windows(2) {
            assert!(
                pair[0] > pair[1],
                "at fixed relative error, more marked items must be cheaper: {fixed:?}"
            );
        }
        let pinned = table.column("cost_pinned").unwrap();
        for pair in pinned.windows(2) {
            assert!(
                pair[0] < pair[1],
                "pinning the absolute count must get dearer with K: {pinned:?}"
            );
        }
    }

    #[test]
    fn trace_error_grows_linearly_in_dimension() {
        let table = run_experiment(&spec("trace_scaling")).unwrap();
        let dims = table.column("dim").unwrap();
        let trace_err = table.column("median_trace_error").unwrap();
        let norm_err = table.column("median_normalized_error").unwrap();

        let slope = log_log_slope(&dims, &trace_err).unwrap();
        assert!(
            (slope - 1.0).abs() < 0.15,
            "re-scaled trace error should grow like the dimension, slope {slope}"
        );
        let max = norm_err.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = norm_err.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(
            max / min < 3.0,
            "normalized error should stay flat: {norm_err:?}"
        );
    }

    #[test]
    fn classification_error_grows_with_exact_exponent_two() {
        let table = run_experiment(&spec("classification_z_scaling")).unwrap();
        let zs = table.column("z").unwrap();
        let errors = table.column("mean_distance_error").unwrap();
        let slope = log_log_slope(&zs, &errors).unwrap();
        assert!(
            (slope - 2.0).abs() < 1e-6,
            "paired trials must expose the exact Z^2 amplification, slope {slope}"
        );
        let d = table.column("distance_exact").unwrap();
        for (z, d) in zs.iter().zip(&d) {
            assert!((d - 2.0 * 0.1 * z * z).abs() < 1e-12);
        }
    }

    #[test]
    fn runs_are_deterministic_across_repeats_and_thread_counts() {
        let mut base = spec("trace_scaling");
        base.params
            .insert("m_values".to_string(), ParamValue::Ints(vec![16, 64]));
        base.params.insert("trials".to_string(), ParamValue::Int(8));
        base.params.insert("shots".to_string(), ParamValue::Int(64));

        let first = run_experiment(&base).unwrap();
        let second = run_experiment(&base).unwrap();
        let mut threaded = base.clone();
        threaded.threads = 3;
        let third = run_experiment(&threaded).unwrap();

        assert_eq!(first.to_csv(), second.to_csv());
        assert_eq!(first.to_csv(), third.to_csv());

        let mut reseeded = base.clone();
        reseeded.seed = 8;
        let fourth = run_experiment(&reseeded).unwrap();
        assert_ne!(first.to_csv(), fourth.to_csv(), "the seed must matter");
    }

    #[test]
    fn classification_rejects_z_out_of_the_paired_construction_range() {
        let mut s = spec("classification_z_scaling");
        s.params
            .insert("z_values".to_string(), ParamValue::Floats(vec![6.0]));
        match run_experiment(&s) {
            Err(Error::BadParameter { key, .. }) => assert_eq!(key, "z_values"),
            other => panic!("expected BadParameter, got {other:?}"),
        }
    }
}
