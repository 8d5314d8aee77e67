use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("schatten exponent p must lie in (0, 1], got {0}")]
    InvalidP(f64),
    #[error("threshold tau must be positive and finite, got {0}")]
    InvalidTau(f64),
    #[error("inverse DFT left an imaginary residue of {residue:e}; input is not conjugate-symmetric")]
    ConjugateSymmetryViolation { residue: f64 },
    #[error("tensor data has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at flat index {0}")]
    NonFinite(usize),
    #[error("feature dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("anchor count {m} invalid for {n} samples")]
    InvalidM { m: usize, n: usize },
    #[error("neighbour count {k} invalid for {m} anchors (need 1 <= k < m)")]
    InvalidK { k: usize, m: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{m} anchors is fewer than {c} clusters")]
    TooFewAnchors { m: usize, c: usize },
    #[error("linear system for view {view} is not positive definite")]
    SingularSystem { view: usize },
    #[error("cannot project an empty vector")]
    EmptyVector,
    #[error("contingency table is empty")]
    EmptyTable,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
