//! qcaveat-core: a numerical laboratory for error amplification in quantum
//! linear-algebra pipelines.
//!
//! The crate simulates small instances of the standard quantum
//! linear-algebra stack — phase estimation, eigenvalue-inversion linear
//! solvers, and the machine-learning estimators built on top of them — with
//! exact dense linear algebra, so that every error term and cost formula can
//! be checked numerically instead of asymptotically.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`] — dense complex matrices, a Hermitian eigensolver, spectral
//!   norm bounds, condition numbers, thresholded (filtered) solves, and
//!   matrix exponentials.
//! * [`statevector`] — a dense register-structured statevector simulator
//!   (controlled powers, inverse QFT, measurement, shot sampling).
//! * [`qpe`] — phase-estimation configuration, the closed-form outcome
//!   distribution, the full circuit route, and eigenvalue decoding.
//! * [`hhl`] — eigenvalue-inversion solvers: an analytic model and a full
//!   circuit simulation, plus matrix rescaling.
//! * [`errorlab`] — error ledgers (exact vs. filtered solutions), accuracy
//!   budgets, and the symbolic cost model.
//! * [`qml`] — swap-test estimators, regression prediction, classification
//!   distance, trace estimation, and least-squares SVM assembly.
//! * [`experiments`] — the registered scaling scenarios behind the CLI.
//! * [`serialize`] — JSON/CSV interchange schemas.
//! * [`synth`] — deterministic random instance generators used by the
//!   scenarios and the test suites.

pub mod error;
pub mod errorlab;
pub mod experiments;
pub mod hhl;
pub mod linalg;
pub mod qml;
pub mod qpe;
pub mod rng;
pub mod serialize;
pub mod statevector;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;
