use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} (expected {expected}, got {found})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("density matrix is not Hermitian: |rho[{row}][{col}] - conj(rho[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("density matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("bath mode frequency must be strictly positive, got {omega}")]
    NonpositiveOmega { omega: f64 },

    #[error("time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },

    #[error("inverse temperature must be positive or +inf, got {beta}")]
    InvalidTemperature { beta: f64 },

    #[error("invalid spectral function: {0}")]
    InvalidSpectralFunction(String),

    #[error("tolerance must be positive and finite, got {tol}")]
    InvalidTolerance { tol: f64 },

    #[error(
        "quadrature did not reach the requested tolerance: estimate {estimate}, error {error:e}"
    )]
    QuadratureNonconvergence { estimate: f64, error: f64 },

    #[error(
        "regimes undefined: cutoff time 1/omega_c = {inverse_cutoff} is not below beta = {beta}"
    )]
    RegimeUndefined { inverse_cutoff: f64, beta: f64 },

    #[error("fit window holds {found} samples, need at least {required}")]
    InsufficientSamples { found: usize, required: usize },

    #[error("gamma must be positive inside the fit window (t = {t}, gamma = {gamma})")]
    NonpositiveGamma { t: f64, gamma: f64 },

    #[error("invalid decoherence curve: {0}")]
    InvalidCurve(String),

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("total Hilbert-space dimension {dimension} exceeds budget {budget}{}", best_delta.map(|d| format!(" (best achieved delta {d:e})")).unwrap_or_default())]
    DimensionBudgetExceeded {
        dimension: usize,
        budget: usize,
        best_delta: Option<f64>,
    },

    #[error("Hermitian eigendecomposition failed to converge (dimension {dimension})")]
    EigendecompositionFailure { dimension: usize },

    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),
}
