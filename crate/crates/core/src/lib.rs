//! Algebraic Riccati equations with coefficients in even-weighted Wiener
//! algebras of the circle.
//!
//! The equation `P B B⋆ P - P A - A⋆ P - C⋆ C = 0` is solved through the
//! Gelfand transform: at every sampled point `e^{iθ}` of the circle the
//! evaluated data give a finite-dimensional Riccati equation whose
//! stabilizing solution `Π(θ)` is computed by an ordered Schur method. The
//! Fourier coefficients of `P` are recovered by inverse DFT and the result
//! is certified for closed-loop stability and weighted-norm decay.
//!
//! Modules:
//! - [`algebra`]: Laurent series, weights, involutions, Gelfand evaluation.
//! - [`care`]: pointwise Riccati solver and PBH rank tests.
//! - [`field`]: hypothesis checks, sampled solve, coefficient recovery, certificates.
//! - [`spatial`]: block-circulant rings of subsystems, gain decay, simulation.

pub mod algebra;
pub mod care;
pub mod catalog;
pub mod error;
pub mod field;
pub mod linalg;
pub mod par;
pub mod report;
pub mod spatial;

pub use algebra::{InvolutionKind, LaurentElement, LaurentMatrix, WeightSequence};
pub use care::{solve_care, CareInstance, CareSolution};
pub use error::{AlgebraError, CareError, FieldError, SpatialError};
pub use field::{FieldOptions, FieldProblem, FieldSolution, SampleGrid, Verdict};
pub use par::Execution;
