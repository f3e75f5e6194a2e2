use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    BadShape { n: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("matrix is not unimodular over the integers (det = {det})")]
    NotUnimodular { det: String },
    #[error("matrix is singular modulo {0}")]
    SingularModP(u64),
    #[error("exponent bound {0} is not annihilating")]
    BoundNotAnnihilating(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index ({i}, {j}) out of range for dimension {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
