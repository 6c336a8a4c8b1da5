use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the toolkit.
///
/// Every variant is a precondition or contract violation except
/// [`Error::NonConvergence`], which signals that an iterative solver ran
/// out of its iteration budget.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must have dimension >= 1")]
    EmptyVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("exponent {0} is not in [1, inf] (p < 1 does not define a norm: its unit ball is not convex)")]
    InvalidExponent(f64),

    #[error("exponents p={p}, q={q} are not conjugate")]
    NotConjugate { p: f64, q: f64 },

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("invalid tolerance profile: {0}")]
    InvalidTolerance(String),

    #[error("operation requires a nonzero vector")]
    ZeroVector,

    #[error("operation requires real inputs")]
    ComplexUnsupported,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix is singular or numerically rank-deficient")]
    SingularMatrix,

    #[error("invalid convex set description: {0}")]
    InvalidSet(String),

    #[error("no strict separation: the point lies in or on the set")]
    NoStrictSeparation,

    #[error("point is not in the set")]
    NotInSet,

    #[error("direction is not exterior to the set at the given point")]
    NotExterior,

    #[error("inconsistent functional values: {0}")]
    InconsistentValues(String),

    #[error(
        "rank-one decomposition does not reconstruct the map (max entry error {max_error:.3e})"
    )]
    ReconstructionMismatch { max_error: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("solver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
}
