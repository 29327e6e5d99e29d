use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("w = x = 0: both eigenvalues vanish and the eigenvectors are not unique")]
    DegeneratePair,

    #[error("level difference changes sign {} times in the window: {roots:?}", roots.len())]
    MultipleRoots { roots: Vec<f64> },

    #[error("bare ground energies do not cross: {0}")]
    NoCrossing(String),

    #[error("ill-conditioned overlap: smallest retained eigenvalue {smallest:e}")]
    IllConditioned { smallest: f64 },

    #[error("level {level} is within {separation:e} of another level (threshold {threshold})")]
    NearDegenerate {
        level: usize,
        separation: f64,
        threshold: f64,
    },

    #[error("|e_L0 - e_R0| = {difference:e} is not above {threshold}")]
    TooCloseToCrossing { difference: f64, threshold: f64 },

    #[error("Q-level {level} is degenerate with the reference energy")]
    SingularComplement { level: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
