use thiserror::Error;

/// Errors raised by the functional-tree toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("table has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("entry {value} at index {index} out of range for modulus {n}")]
    EntryOutOfRange { index: usize, value: usize, n: usize },
    #[error("vertex {vertex} out of range for modulus {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("table is not a bijection: value {value} repeated")]
    NotBijective { value: usize },
    #[error("map is not a tree function (|f^(n-1)(Z_n)| != 1)")]
    NotTree,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("{op} refuses n = {n}: exhaustive cap is {cap}")]
    CapExceeded { op: &'static str, n: usize, cap: usize },
    #[error("modulus {0} is even: 2 has no inverse")]
    EvenModulus(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("labeling is not harmonious: edge sums collide")]
    NotHarmonious,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
