use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eigenvalues are only computed for matrices of size at most 4 (got {0})")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exact and floating matrices cannot be combined")]
    ModeMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("genus must be at least 1 (got {0})")]
    InvalidGenus(u32),
    #[error("generator index {index} out of range for {generators} generators")]
    IndexOutOfRange { index: usize, generators: usize },
    #[error("rank of H^1(Z) ({integral}) differs from dim H^1(C) ({complex})")]
    RankMismatch { integral: usize, complex: usize },
    #[error("cochain is not closed (max defect {0:e})")]
    NotClosed(f64),
    #[error("cochain is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("transition missing on edge ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error("1-skeleton is not connected")]
    Disconnected,
    #[error("transition data fails the cocycle condition on {0:?}")]
    InvalidCocycle(Vec<usize>),
    #[error("representation does not match the presentation: {0}")]
    PresentationMismatch(String),
    #[error("differential is only defined up to degree 1 on a surface (got {0})")]
    DegreeTooHigh(usize),
    #[error("path is broken between edge {0} and the next edge")]
    BrokenPath(usize),
    #[error("edge ({0}, {1}) is not an edge of the surface")]
    UnknownEdge(usize, usize),
    #[error("connection is not flat on face {0:?}")]
    NotFlat([usize; 3]),
    #[error("rank must be 1 (got {0})")]
    RankNotOne(usize),
    #[error("path passes within {distance:e} of the pole at {pole}")]
    PoleTooClose { pole: String, distance: f64 },
    #[error("step size underflow at parameter {0}")]
    StepUnderflow(f64),
    #[error("lambda = 0 degenerates to a Higgs field and has no monodromy")]
    ZeroLambda,
    #[error("resonant system: {0}")]
    ResonantSystem(String),
    #[error("genus mismatch: surface has genus {surface}, nerve has genus {nerve}")]
    GenusMismatch { surface: u32, nerve: u32 },
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid nerve: {0}")]
    InvalidNerve(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
