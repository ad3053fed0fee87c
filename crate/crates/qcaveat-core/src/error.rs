//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the pipeline.
///
/// Variants are grouped roughly by layer: matrix construction and spectral
/// analysis, statevector simulation, solver configuration, estimators, and
/// experiment plumbing.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix entry ({row},{col}) breaks Hermitian symmetry by {deviation:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension {dim} outside supported range 1..={max}")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error(
        "eigensolver did not converge for a {dim}x{dim} matrix: \
         off-diagonal residual {residual:.3e} after {sweeps} sweeps"
    )]
    EigenNonConvergence {
        dim: usize,
        residual: f64,
        sweeps: usize,
    },

    #[error("matrix is numerically singular (|lambda|_min/|lambda|_max = {ratio:.3e})")]
    Singular { ratio: f64 },

    #[error("zero matrix has no spectral scale")]
    ZeroMatrix,

    #[error("every spectral component fell below the filter threshold mu = {mu}")]
    AllModesFiltered { mu: f64 },

    #[error("operator is not unitary: max deviation of U*U from identity is {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("amplitude vector has zero norm")]
    ZeroState,

    #[error("state norm {norm} is not within {tolerance} of 1")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("layout needs {requested} qubits, simulator cap is {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },

    #[error("register layout invalid: {0}")]
    BadLayout(String),

    #[error("no register named {0:?} in this state")]
    UnknownRegister(String),

    #[error("outcome {outcome} out of range for register {register:?} ({size} outcomes)")]
    OutcomeOutOfRange {
        register: String,
        outcome: usize,
        size: usize,
    },

    #[error("postselection probability {probability:.3e} is below the 1e-12 cutoff")]
    PostselectionFailed { probability: f64 },

    #[error(
        "rotation constant {constant} exceeds the smallest kept eigenvalue estimate {lambda:.6e}"
    )]
    RotationConstantTooLarge { constant: f64, lambda: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cost model field {field:?} is required by the {variant:?} variant")]
    CostFieldMissing {
        field: &'static str,
        variant: &'static str,
    },

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    #[error("unknown parameter {key:?} for scenario {scenario:?}")]
    UnknownParameter { scenario: String, key: String },

    #[error("parameter {key:?}: {message}")]
    BadParameter { key: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Convenience constructor for precondition failures.
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
