use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix determinant is {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("matrix is not hyperbolic (trace {0})")]
    NotHyperbolic(String),
    #[error("subgroup mask {0} is not a normal subgroup")]
    NotNormal(&'static str),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("chain is not closed")]
    NotClosed,
    #[error("cochain does not vanish on boundaries")]
    NotCocycle,
    #[error("no stabilizing {0} parabolic found within the search bound")]
    NotFound(&'static str),
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("integer overflow while evaluating a word")]
    Overflow,
    #[error("stage {0} of the commutator chain is empty")]
    EmptyStage(usize),
    #[error("chain element escaped the kernel of representation {0}")]
    ContainmentViolated(usize),
    #[error("elements share a fixed boundary direction")]
    SharedFixedPoint,
    #[error("element has finite order")]
    Elliptic,
    #[error("trajectory hit an obstacle corner at path length {0}")]
    CornerHit(f64),
    #[error("direction is not a unit vector")]
    NonUnitDirection,
    #[error("insufficient data: {0} usable checkpoints")]
    InsufficientData(usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
}
