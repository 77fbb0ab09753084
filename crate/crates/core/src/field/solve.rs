use serde::{Deserialize, Serialize};

use super::certificate::{decay_certificate, stability_certificate, DecayCertificate, StabilityCertificate};
use super::problem::{FieldProblem, SampleGrid};
use super::recovery::{levels_from_samples, CoefficientLevel};
use crate::algebra::{LaurentMatrix, WeightSequence};
use crate::care::{self, CareInstance, GeneralRiccati};
use crate::error::{CareError, FieldError};
use crate::linalg::{spectral_norm, CMat};
use crate::par::{map_indexed, Execution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOptions {
    pub tol: f64,
    pub tol_stab: f64,
    pub weight: WeightSequence,
    pub c1_probe: bool,
    pub execution: Execution,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            tol: care::DEFAULT_TOL,
            tol_stab: 1e-8,
            weight: WeightSequence::Unit,
            c1_probe: false,
            execution: Execution::default(),
        }
    }
}

/// Pointwise Riccati solutions on a grid, the series recovered from them,
/// and the certificates computed from both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSolution {
    pub grid: SampleGrid,
    /// False for solutions forced through without the assumption check.
    pub conforming: bool,
    #[serde(with = "crate::report::cmat_list")]
    pub pi_samples: Vec<CMat>,
    #[serde(rename = "P")]
    pub p: LaurentMatrix,
    /// Riccati residual of the evaluated recovered series at the grid angles.
    pub residual_max: f64,
    /// `max_j ‖Π(θ_{j+1}) - Π(θ_j)‖`, cyclically.
    pub continuity_modulus: f64,
    pub aliasing_estimate: f64,
    pub stability: StabilityCertificate,
    pub decay: DecayCertificate,
}

impl FieldSolution {
    /// `max_j ‖P̂(θ_j) - Π(θ_j)‖`.
    pub fn round_trip_error(&self) -> f64 {
        self.pi_samples
            .iter()
            .enumerate()
            .map(|(j, s)| spectral_norm(&(self.p.eval(self.grid.theta(j)) - s)))
            .fold(0.0, f64::max)
    }

    pub fn levels(&self) -> Vec<CoefficientLevel> {
        levels_from_samples(&self.pi_samples)
    }
}

pub(crate) fn continuity_modulus(samples: &[CMat]) -> f64 {
    let n = samples.len();
    (0..n).map(|j| spectral_norm(&(&samples[(j + 1) % n] - &samples[j]))).fold(0.0, f64::max)
}

fn first_error<T>(results: Vec<Result<T, FieldError>>) -> Result<Vec<T>, FieldError> {
    results.into_iter().collect()
}

impl FieldProblem {
    /// Pointwise Riccati equation at `θ` with matrix adjoints.
    pub fn care_instance(&self, theta: f64) -> Result<CareInstance, CareError> {
        let pt = self.at(theta);
        CareInstance::new(pt.a, pt.b, pt.c)
    }

    /// Pointwise equation at `θ` with the evaluated involutes in place of adjoints.
    pub fn general_riccati(&self, theta: f64) -> GeneralRiccati {
        let pt = self.at(theta);
        GeneralRiccati { a: pt.a, r: pt.gain, d: pt.a_star, q: pt.cost }
    }

    /// Residual of the algebra equation `P B B⋆ P - P A - A⋆ P - C⋆ C` at `θ`.
    pub fn algebra_residual(&self, theta: f64, p: &CMat) -> f64 {
        spectral_norm(&self.general_riccati(theta).residual_matrix(p))
    }

    /// Checks the hypotheses, solves the Riccati equation at every grid angle
    /// and recovers the solution's Fourier coefficients.
    pub fn solve(&self, grid: &SampleGrid, opts: &FieldOptions) -> Result<FieldSolution, FieldError> {
        let report = self.check_assumptions(grid, opts.tol, opts.execution);
        if !report.all_pass() {
            return Err(FieldError::AssumptionViolation(Box::new(report)));
        }
        let samples = first_error(map_indexed(opts.execution, grid.size(), |j| {
            let theta = grid.theta(j);
            self.care_instance(theta)
                .and_then(|inst| care::solve_care(&inst, opts.tol))
                .map(|sol| sol.p)
                .map_err(|source| FieldError::PointwiseSolveFailure { theta, source })
        }))?;
        self.assemble(grid, samples, true, opts)
    }

    /// Pointwise solve that skips the hypothesis check and uses the involuted
    /// data as is. The result is labeled non-conforming.
    pub fn solve_forced(&self, grid: &SampleGrid, opts: &FieldOptions) -> Result<FieldSolution, FieldError> {
        let samples = first_error(map_indexed(opts.execution, grid.size(), |j| {
            let theta = grid.theta(j);
            care::solve_general_riccati(&self.general_riccati(theta), opts.tol)
                .map_err(|source| FieldError::PointwiseSolveFailure { theta, source })
        }))?;
        self.assemble(grid, samples, false, opts)
    }

    fn assemble(
        &self,
        grid: &SampleGrid,
        samples: Vec<CMat>,
        conforming: bool,
        opts: &FieldOptions,
    ) -> Result<FieldSolution, FieldError> {
        let levels = levels_from_samples(&samples);
        let finest = levels.last().expect("grid has at least 8 samples");
        let p = finest.to_laurent();
        let evaluated = finest.retained_on_grid();
        let residual_max =
            map_indexed(opts.execution, grid.size(), |j| self.algebra_residual(grid.theta(j), &evaluated[j]))
                .into_iter()
                .fold(0.0, f64::max);
        let stability = stability_certificate(self.a(), self.b(), grid, &samples, opts.tol_stab, opts.execution)?;
        let decay = decay_certificate(&levels, opts.weight, opts.c1_probe)?;
        Ok(FieldSolution {
            grid: *grid,
            conforming,
            aliasing_estimate: finest.aliasing_estimate(),
            continuity_modulus: continuity_modulus(&samples),
            pi_samples: samples,
            p,
            residual_max,
            stability,
            decay,
        })
    }

    /// Doubles the grid from `n0` until the continuity modulus is at most
    /// `target`, giving up after `n_max`.
    pub fn refine_until_continuous(
        &self,
        n0: usize,
        n_max: usize,
        target: f64,
        opts: &FieldOptions,
    ) -> Result<FieldSolution, FieldError> {
        let mut grid = SampleGrid::new(n0)?;
        SampleGrid::new(n_max)?;
        if n0 > n_max {
            return Err(FieldError::InvalidGrid(n0));
        }
        loop {
            let sol = self.solve(&grid, opts)?;
            if sol.continuity_modulus <= target {
                return Ok(sol);
            }
            if grid.size() >= n_max {
                return Err(FieldError::TargetNotReached {
                    achieved: sol.continuity_modulus,
                    target,
                    grid: grid.size(),
                });
            }
            grid = grid.doubled();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{InvolutionKind, LaurentElement};
    use crate::field::Verdict;

    fn scalar(terms: &[(i64, f64)]) -> LaurentMatrix {
        LaurentMatrix::scalar(LaurentElement::from_real(terms))
    }

    fn corrected() -> FieldProblem {
        FieldProblem::new(
            scalar(&[(-1, 1.0), (1, 1.0)]),
            scalar(&[(0, 1.0)]),
            scalar(&[(0, 1.0)]),
            InvolutionKind::CoeffConjugate,
        )
        .unwrap()
    }

    #[test]
    fn stable_zero_cost_gives_zero() {
        let prob = FieldProblem::new(
            scalar(&[(0, -1.0)]),
            scalar(&[(0, 1.0)]),
            LaurentMatrix::zeros(1, 1),
            InvolutionKind::CoeffConjugate,
        )
        .unwrap();
        let sol = prob.solve(&SampleGrid::new(16).unwrap(), &FieldOptions::default()).unwrap();
        assert!(sol.pi_samples.iter().all(|s| s.norm() < 1e-14));
        assert!(sol.p.coeff_matrix(0).norm() < 1e-14);
        assert!((sol.stability.abscissa + 1.0).abs() < 1e-12);
        assert_eq!(sol.decay.verdict(), Verdict::CertifiedMember);
    }

    #[test]
    fn counterexample_is_rejected() {
        let prob = FieldProblem::new(
            scalar(&[(1, 1.0)]),
            scalar(&[(0, 1.0)]),
            scalar(&[(0, 1.0)]),
            InvolutionKind::CoeffConjugate,
        )
        .unwrap();
        let err = prob.refine_until_continuous(16, 256, 0.2, &FieldOptions::default()).unwrap_err();
        match err {
            FieldError::AssumptionViolation(report) => assert_eq!(report.failed(), vec!["a1"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refinement_reaches_target() {
        let sol = corrected().refine_until_continuous(16, 4096, 0.2, &FieldOptions::default()).unwrap();
        assert!(sol.grid.size() <= 256);
        assert!(sol.continuity_modulus <= 0.2);
        let err = corrected().refine_until_continuous(16, 32, 1e-3, &FieldOptions::default()).unwrap_err();
        assert!(matches!(err, FieldError::TargetNotReached { grid: 32, .. }));
    }

    #[test]
    fn constant_data_has_zero_modulus() {
        let one = scalar(&[(0, 1.0)]);
        let prob =
            FieldProblem::new(scalar(&[(0, -1.0)]), one.clone(), one, InvolutionKind::HermitianOnCircle).unwrap();
        let sol = prob.refine_until_continuous(16, 64, 0.0, &FieldOptions::default()).unwrap();
        assert_eq!(sol.grid.size(), 16);
        assert_eq!(sol.continuity_modulus, 0.0);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let grid = SampleGrid::new(128).unwrap();
        let seq =
            corrected().solve(&grid, &FieldOptions { execution: Execution::Sequential, ..Default::default() }).unwrap();
        let par =
            corrected().solve(&grid, &FieldOptions { execution: Execution::Parallel, ..Default::default() }).unwrap();
        assert_eq!(seq, par);
    }
}
