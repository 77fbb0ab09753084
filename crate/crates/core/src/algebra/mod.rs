//! Even-weighted Wiener algebras of the circle.
//!
//! Elements are finitely supported Laurent series `Σ c_k z^k`. The Gelfand
//! transform of an element is its evaluation on the unit circle, so every
//! algebraic identity here can be checked pointwise at `z = e^{iθ}`.

mod element;
mod matrix;
mod weight;

pub use element::{InvolutionKind, LaurentElement, PRUNE_RELATIVE};
pub use matrix::LaurentMatrix;
pub use weight::{WeightReport, WeightSequence};
