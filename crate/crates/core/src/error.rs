use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: expected (m={m}, n={n}), got (m={other_m}, n={other_n})")]
    ShapeMismatch {
        m: usize,
        n: usize,
        other_m: usize,
        other_n: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("order m={0} must be even")]
    OddOrder(usize),

    #[error("integer overflow while computing multinomial coefficient of {0}")]
    Overflow(String),

    #[error("matrix is not symmetric: asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix is singular to working precision at pivot {pivot} (|pivot| = {value:e})")]
    Singular { pivot: usize, value: f64 },

    #[error("duplicate nodes at positions {first} and {second} (value {value})")]
    DuplicateNodes { first: usize, second: usize, value: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
