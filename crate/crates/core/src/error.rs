use thiserror::Error;

use crate::field::AssumptionReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseWeightError {
    #[error("weight spec {0:?} is not one of unit | poly:<s> | subexp:<a>,<b>")]
    Syntax(String),
    #[error("{0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("bad shape: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CareError {
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("(A, B) is not stabilizable")]
    NotStabilizable,
    #[error("(A, C) is not detectable")]
    NotDetectable,
    #[error("stable invariant subspace is ill conditioned: {0}")]
    SubspaceIllConditioned(String),
    #[error("Schur iteration did not converge")]
    SchurFailed,
}

#[derive(Debug, Clone, Error)]
pub enum FieldError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGrid(usize),
    #[error("assumption check failed: {}", .0.failed().join(", "))]
    AssumptionViolation(Box<AssumptionReport>),
    #[error("pointwise solve failed at theta = {theta}: {source}")]
    PointwiseSolveFailure { theta: f64, source: CareError },
    #[error("continuity modulus {achieved:e} above target {target:e} at N = {grid}")]
    TargetNotReached { achieved: f64, target: f64, grid: usize },
    #[error("decay certificate needs at least 3 doubling levels, got {0}")]
    InsufficientLevels(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpatialError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("ring of {ring} subsystems cannot hold support bound {support} (need ring > 2 * support)")]
    SupportTooWide { support: u64, ring: usize },
    #[error("initial state has length {got}, expected {expected}")]
    StateLength { got: usize, expected: usize },
}
