//! Riccati equations over the algebra, solved on samples of its maximal
//! ideal space (the unit circle).
//!
//! The pipeline is: check the five hypotheses at every grid angle, solve the
//! finite-dimensional equation at each angle, recover Fourier coefficients
//! by inverse DFT, then certify closed-loop stability and decay of the
//! recovered coefficients in a weighted norm.

mod certificate;
mod problem;
mod recovery;
mod solve;

pub use certificate::{
    decay_certificate, stability_certificate, DecayCertificate, SeriesTrend, StabilityCertificate, Verdict,
    ALIASING_LIMIT, DIVERGENCE_RATIO, PLATEAU_GROWTH,
};
pub use problem::{AssumptionCheck, AssumptionReport, FieldProblem, SampleGrid};
pub use recovery::{levels_from_samples, CoefficientLevel};
pub use solve::{FieldOptions, FieldSolution};
