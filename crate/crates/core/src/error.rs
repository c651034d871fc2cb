//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DqError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("index {index} out of range for grid of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("duplicate grid point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("point lies outside the convex hull of the grid")]
    Infeasible,

    #[error("grid is flat: affine dimension {adim} < ambient dimension {dim}")]
    FlatGrid { adim: usize, dim: usize },

    #[error("singular matrix (stale or degenerate factorization)")]
    Singular,

    #[error("degenerate simplex: vertices are affinely dependent")]
    Degenerate,

    #[error("all points are collinear")]
    Collinear,

    #[error("norm is not differentiable at the requested point")]
    NonSmooth,

    #[error("combinatorial budget exceeded: {0} candidate bases")]
    BudgetExceeded(u128),

    #[error("sample outside the convex hull of the grid")]
    SampleOutsideHull,

    #[error("grid must be strictly increasing")]
    Unordered,

    #[error("distribution has no one-dimensional analytics")]
    MissingAnalytics,

    #[error("distribution support is unbounded")]
    UnboundedSupport,

    #[error("support is not contained in the grid hull")]
    SupportNotCovered,

    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NotConverged { iterations: usize, gradient_norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DqError {
    fn from(e: std::io::Error) -> Self {
        DqError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DqError>;
