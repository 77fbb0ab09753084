//! Scalar reference problems with known pointwise solutions.
//!
//! All three use `B = C = 1`:
//! - `counterexample`: `A = z`, coefficient-conjugate involution. `A⋆ = z`
//!   disagrees with the pointwise adjoint, and the pointwise root
//!   `z + sqrt(z² + 1)` is not continuously differentiable.
//! - `corrected`: `A = z + 1/z`, coefficient-conjugate involution, with
//!   `Π(θ) = 2cos θ + sqrt(4cos²θ + 1)`.
//! - `second_involution`: `A = z`, Hermitian-on-circle involution, with
//!   `Π(θ) = cos θ + sqrt(cos²θ + 1)`.

use num_complex::Complex64;

use crate::algebra::{InvolutionKind, LaurentElement, LaurentMatrix};
use crate::field::FieldProblem;

fn scalar(terms: &[(i64, f64)]) -> LaurentMatrix {
    LaurentMatrix::scalar(LaurentElement::from_real(terms))
}

fn with_unit_io(a: LaurentMatrix, kind: InvolutionKind) -> FieldProblem {
    FieldProblem::new(a, scalar(&[(0, 1.0)]), scalar(&[(0, 1.0)]), kind).expect("scalar data")
}

pub fn counterexample() -> FieldProblem {
    with_unit_io(scalar(&[(1, 1.0)]), InvolutionKind::CoeffConjugate)
}

pub fn corrected() -> FieldProblem {
    with_unit_io(scalar(&[(-1, 1.0), (1, 1.0)]), InvolutionKind::CoeffConjugate)
}

pub fn second_involution() -> FieldProblem {
    with_unit_io(scalar(&[(1, 1.0)]), InvolutionKind::HermitianOnCircle)
}

pub fn corrected_pi(theta: f64) -> f64 {
    let a = 2.0 * theta.cos();
    a + (a * a + 1.0).sqrt()
}

/// Closed-loop symbol of the corrected example, `-sqrt(4cos²θ + 1)`.
pub fn corrected_closed_loop(theta: f64) -> f64 {
    let a = 2.0 * theta.cos();
    -(a * a + 1.0).sqrt()
}

pub fn second_involution_pi(theta: f64) -> f64 {
    let a = theta.cos();
    a + (a * a + 1.0).sqrt()
}

/// Principal-branch root `z + sqrt(z² + 1)` at `z = e^{iθ}`.
pub fn counterexample_root(theta: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, theta);
    z + (z * z + 1.0).sqrt()
}
