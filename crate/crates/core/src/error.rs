use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("eigenvector basis is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("matrix is singular on the requested subspace")]
    Singular,

    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("momentum must be nonzero: {0}")]
    ZeroMomentum(&'static str),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not a pure {0} branch state (residual {1:.3e})")]
    MixedBranch(&'static str, f64),

    #[error("indefinite-norm state: signed norm {0:.3e} is too close to zero")]
    IndefiniteNorm(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
