//! Stabilizing solutions of the finite-dimensional Riccati equation
//!
//! ```text
//! P B B^H P - P A - A^H P - C^H C = 0
//! ```
//!
//! at one point of the Gelfand spectrum, plus the rank tests that decide
//! whether such a solution exists.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CareError;
use crate::linalg::{
    self, condition_number, hermitian_min_eig, lyapunov_margin, numerical_rank, reorder_schur, reorder_schur_mask,
    spectral_norm, CMat,
};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Constant complex data `(A, B, C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CareInstance {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
}

impl CareInstance {
    pub fn new(a: CMat, b: CMat, c: CMat) -> Result<Self, CareError> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(CareError::Dimension(format!("A is {}x{}", n, a.ncols())));
        }
        if b.nrows() != n {
            return Err(CareError::Dimension(format!("B has {} rows, A has {}", b.nrows(), n)));
        }
        if c.ncols() != n {
            return Err(CareError::Dimension(format!("C has {} columns, A has {}", c.ncols(), n)));
        }
        let finite = |m: &CMat| m.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !(finite(&a) && finite(&b) && finite(&c)) {
            return Err(CareError::NonFinite);
        }
        Ok(Self { a, b, c })
    }

    /// Scalar instance `(a, b, c)`.
    pub fn scalar(a: impl Into<Complex64>, b: impl Into<Complex64>, c: impl Into<Complex64>) -> Self {
        let one = |z: Complex64| DMatrix::from_element(1, 1, z);
        Self { a: one(a.into()), b: one(b.into()), c: one(c.into()) }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `1 + ‖A‖ + ‖B‖² + ‖C‖²`, the scale residuals are measured against.
    pub fn scale(&self) -> f64 {
        1.0 + spectral_norm(&self.a) + spectral_norm(&self.b).powi(2) + spectral_norm(&self.c).powi(2)
    }

    fn gain_square(&self) -> CMat {
        &self.b * self.b.adjoint()
    }

    fn output_square(&self) -> CMat {
        self.c.adjoint() * &self.c
    }

    pub fn closed_loop(&self, p: &CMat) -> CMat {
        &self.a - self.gain_square() * p
    }

    pub fn residual_matrix(&self, p: &CMat) -> CMat {
        p * self.gain_square() * p - p * &self.a - self.a.adjoint() * p - self.output_square()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CareSolution {
    pub p: CMat,
    pub closed_loop_eigs: Vec<Complex64>,
    pub residual: f64,
    pub hermiticity_defect: f64,
    pub min_eig_p: f64,
    /// `min |conj(λ) + μ|` over closed-loop eigenvalue pairs.
    pub jacobian_margin: f64,
}

impl CareSolution {
    pub fn closed_loop_abscissa(&self) -> f64 {
        self.closed_loop_eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Kalman rank test on `[B AB … A^{n-1}B]`.
pub fn controllable(a: &CMat, b: &CMat, tol: f64) -> bool {
    let n = a.nrows();
    let m = b.ncols();
    let mut krylov = CMat::zeros(n, n * m);
    let mut block = b.clone();
    for i in 0..n {
        krylov.columns_mut(i * m, m).copy_from(&block);
        block = a * block;
    }
    numerical_rank(&krylov, tol) == n
}

/// PBH test: `[λI - A | B]` has full row rank at every eigenvalue with `Re λ ≥ -tol`.
pub fn pbh_stabilizable(a: &CMat, b: &CMat, tol: f64) -> bool {
    let n = a.nrows();
    let Ok(eigs) = linalg::eigenvalues(a) else {
        return false;
    };
    eigs.iter().filter(|l| l.re >= -tol).all(|&l| {
        let mut pencil = CMat::zeros(n, n + b.ncols());
        pencil.columns_mut(0, n).copy_from(&(CMat::identity(n, n).scale(1.0) * l - a));
        pencil.columns_mut(n, b.ncols()).copy_from(b);
        numerical_rank(&pencil, tol) == n
    })
}

/// `(A, C)` is detectable iff `(A^H, C^H)` is stabilizable.
pub fn pbh_detectable(a: &CMat, c: &CMat, tol: f64) -> bool {
    pbh_stabilizable(&a.adjoint(), &c.adjoint(), tol)
}

/// Spectral norm of `P B B^H P - P A - A^H P - C^H C`.
pub fn care_residual(inst: &CareInstance, p: &CMat) -> f64 {
    spectral_norm(&inst.residual_matrix(p))
}

/// One Newton step: solve `Ac^H Δ + Δ Ac = R(P)` with `Ac = A - B B^H P`.
pub fn newton_step(inst: &CareInstance, p: &CMat) -> Result<CMat, CareError> {
    let delta = linalg::solve_lyapunov(&inst.closed_loop(p), &inst.residual_matrix(p))?;
    Ok(p + delta)
}

/// Runs `steps` Newton iterations from `p`.
pub fn newton_refine(inst: &CareInstance, p: &CMat, steps: usize) -> Result<CMat, CareError> {
    let mut p = p.clone();
    for _ in 0..steps {
        p = newton_step(inst, &p)?;
    }
    Ok(p)
}

/// Reads `X₂ X₁^{-1}` off the invariant subspace of the `2n × 2n` matrix
/// `[[A, -R], [-Q, -D]]` belonging to the `n` eigenvalues picked by `select`.
fn invariant_subspace_solution(
    a: &CMat,
    r: &CMat,
    q: &CMat,
    d: &CMat,
    tol: f64,
    guard: Option<f64>,
) -> Result<CMat, CareError> {
    let n = a.nrows();
    let mut h = CMat::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(&(-r));
    h.view_mut((n, 0), (n, n)).copy_from(&(-q));
    h.view_mut((n, n), (n, n)).copy_from(&(-d));

    let (mut basis, mut t) = linalg::schur(&h)?;
    let placed = match guard {
        Some(band) => {
            let band = band * (1.0 + h.norm());
            if let Some(z) = t.diagonal().iter().find(|z| z.re.abs() < band) {
                return Err(CareError::SubspaceIllConditioned(format!(
                    "Hamiltonian eigenvalue {z} within {band:e} of the imaginary axis"
                )));
            }
            reorder_schur(&mut basis, &mut t, |z| z.re < 0.0)
        }
        None => {
            // n eigenvalues of smallest real part, ties broken by position
            let mut order: Vec<usize> = (0..2 * n).collect();
            order.sort_by(|&i, &j| t[(i, i)].re.total_cmp(&t[(j, j)].re));
            let mut mask = vec![false; 2 * n];
            for &i in &order[..n] {
                mask[i] = true;
            }
            reorder_schur_mask(&mut basis, &mut t, mask)
        }
    };
    if placed != n {
        return Err(CareError::SubspaceIllConditioned(format!(
            "found {placed} stable Hamiltonian eigenvalues, expected {n}"
        )));
    }
    let x1 = basis.view((0, 0), (n, n)).into_owned();
    let x2 = basis.view((n, 0), (n, n)).into_owned();
    let cond = condition_number(&x1);
    // NaN condition numbers count as ill-conditioned
    if cond.is_nan() || cond > 1.0 / tol {
        return Err(CareError::SubspaceIllConditioned(format!("cond(X1) = {cond:e}")));
    }
    let x1_inv = x1.try_inverse().ok_or_else(|| CareError::SubspaceIllConditioned("X1 singular".into()))?;
    Ok(x2 * x1_inv)
}

/// Stabilizing Hermitian positive semidefinite solution via an ordered Schur
/// form of the Hamiltonian, followed by Hermitization and one Newton step.
pub fn solve_care(inst: &CareInstance, tol: f64) -> Result<CareSolution, CareError> {
    if !pbh_stabilizable(&inst.a, &inst.b, tol) {
        return Err(CareError::NotStabilizable);
    }
    if !pbh_detectable(&inst.a, &inst.c, tol) {
        return Err(CareError::NotDetectable);
    }
    let r = inst.gain_square();
    let q = inst.output_square();
    let p = invariant_subspace_solution(&inst.a, &r, &q, &inst.a.adjoint(), tol, Some(tol))?;
    let p = linalg::hermitian_part(&p);
    let p = linalg::hermitian_part(&newton_step(inst, &p)?);
    summarize(inst, p)
}

fn summarize(inst: &CareInstance, p: CMat) -> Result<CareSolution, CareError> {
    let closed_loop_eigs = linalg::eigenvalues(&inst.closed_loop(&p))?;
    Ok(CareSolution {
        residual: care_residual(inst, &p),
        hermiticity_defect: spectral_norm(&(&p - p.adjoint())),
        min_eig_p: hermitian_min_eig(&p),
        jacobian_margin: lyapunov_margin(&closed_loop_eigs),
        closed_loop_eigs,
        p,
    })
}

/// Data for the non-symmetric equation `X R X - X A - D X - Q = 0`, where
/// `R`, `D`, `Q` stand for the evaluated `B B⋆`, `A⋆`, `C⋆ C` and need not be
/// adjoints of anything.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralRiccati {
    pub a: CMat,
    pub r: CMat,
    pub d: CMat,
    pub q: CMat,
}

impl GeneralRiccati {
    pub fn residual_matrix(&self, x: &CMat) -> CMat {
        x * &self.r * x - x * &self.a - &self.d * x - &self.q
    }

    pub fn closed_loop(&self, x: &CMat) -> CMat {
        &self.a - &self.r * x
    }
}

/// Solves [`GeneralRiccati`] from the invariant subspace of the `n`
/// leftmost eigenvalues, with no stabilizability or symmetry requirement.
pub fn solve_general_riccati(eq: &GeneralRiccati, tol: f64) -> Result<CMat, CareError> {
    invariant_subspace_solution(&eq.a, &eq.r, &eq.q, &eq.d, tol, None)
}
