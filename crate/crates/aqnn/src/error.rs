use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian deviates from its adjoint beyond tolerance.
    #[error("matrix is not Hermitian (max |A - A†| entry = {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    /// A dimension argument is out of the supported range.
    #[error("bad dimension {dim}: {context}")]
    BadDimension { dim: usize, context: &'static str },

    /// A rank argument is out of range for the requested dimension.
    #[error("bad rank {rank} for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    /// A value that must be a valid density matrix fails one of its checks.
    #[error("not a valid density matrix: {context} (residual {residual:.3e})")]
    InvalidState { context: &'static str, residual: f64 },

    /// A channel fails the complete-positivity / trace-preservation test.
    #[error(
        "channel is not CPTP (min Choi eigenvalue {min_choi_eigenvalue:.3e}, \
         trace-preservation residual {tp_residual:.3e})"
    )]
    NotCptp {
        min_choi_eigenvalue: f64,
        tp_residual: f64,
    },

    /// A matrix that must be positive semidefinite has a negative eigenvalue.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    /// An operation was invoked on a channel variant it does not apply to.
    #[error("operation requires the {expected} channel variant, got {got}")]
    WrongVariant {
        expected: &'static str,
        got: &'static str,
    },

    /// Iterated application failed to reach the coherence threshold within the cap.
    #[error("coherence stayed above {threshold:.3e} after {cap} channel applications")]
    DepthExceeded { threshold: f64, cap: u64 },

    /// A dilation's coefficient system has no solution for the given parameters.
    #[error("dilation constraints are infeasible: {context} (violation {violation:.3e})")]
    ConstraintInfeasible { context: String, violation: f64 },

    /// The requested problem size exceeds what the dense solver is meant for.
    #[error("dimension {dim} exceeds the solver limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    /// The iterative solver stopped without meeting its convergence criteria.
    #[error("solver did not converge: {context} (residual {residual:.3e})")]
    SolverDidNotConverge { context: &'static str, residual: f64 },

    /// Malformed JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// File-system failure while reading or writing artifacts.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
