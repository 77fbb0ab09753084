use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{InvolutionKind, LaurentMatrix};
use crate::care;
use crate::error::{AlgebraError, FieldError};
use crate::linalg::{spectral_norm, CMat};
use crate::par::{map_indexed, Execution};

/// `N` equispaced points `2πj/N` on the circle, `N ≥ 8` a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct SampleGrid {
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr {
    n: usize,
}

impl TryFrom<GridRepr> for SampleGrid {
    type Error = FieldError;

    fn try_from(r: GridRepr) -> Result<Self, FieldError> {
        SampleGrid::new(r.n)
    }
}

impl SampleGrid {
    pub fn new(n: usize) -> Result<Self, FieldError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(FieldError::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.theta(j)).collect()
    }

    pub fn doubled(&self) -> Self {
        Self { n: 2 * self.n }
    }
}

/// Outcome of one of the five hypotheses over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub pass: bool,
    pub worst_theta: f64,
    pub worst_defect: f64,
}

/// `a1`–`a3`: the involution agrees with the matrix adjoint after Gelfand
/// evaluation for `A`, `B B⋆`, `C⋆ C`. `a4`/`a5`: pointwise stabilizability
/// and detectability (defect 1 marks a failing sample).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub a1: AssumptionCheck,
    pub a2: AssumptionCheck,
    pub a3: AssumptionCheck,
    pub a4: AssumptionCheck,
    pub a5: AssumptionCheck,
}

impl AssumptionReport {
    pub fn checks(&self) -> [(&'static str, &AssumptionCheck); 5] {
        [("a1", &self.a1), ("a2", &self.a2), ("a3", &self.a3), ("a4", &self.a4), ("a5", &self.a5)]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.pass)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks().iter().filter(|(_, c)| !c.pass).map(|(name, _)| *name).collect()
    }
}

/// Riccati data `(A, B, C)` over the algebra together with its involution.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProblem {
    a: LaurentMatrix,
    b: LaurentMatrix,
    c: LaurentMatrix,
    involution: InvolutionKind,
    a_star: LaurentMatrix,
    gain: LaurentMatrix,
    cost: LaurentMatrix,
}

/// Pointwise data at one angle.
pub(crate) struct PointData {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub a_star: CMat,
    pub gain: CMat,
    pub cost: CMat,
}

impl FieldProblem {
    pub fn new(
        a: LaurentMatrix,
        b: LaurentMatrix,
        c: LaurentMatrix,
        involution: InvolutionKind,
    ) -> Result<Self, AlgebraError> {
        let n = a.rows();
        if n == 0 || a.cols() != n {
            return Err(AlgebraError::Shape(format!("A must be square and nonempty, got {}x{}", n, a.cols())));
        }
        if b.rows() != n || b.cols() == 0 {
            return Err(AlgebraError::Shape(format!("B must be {n}xm with m >= 1, got {}x{}", b.rows(), b.cols())));
        }
        if c.cols() != n || c.rows() == 0 {
            return Err(AlgebraError::Shape(format!("C must be px{n} with p >= 1, got {}x{}", c.rows(), c.cols())));
        }
        let a_star = a.involute(involution);
        let gain = b.multiply(&b.involute(involution))?;
        let cost = c.involute(involution).multiply(&c)?;
        Ok(Self { a, b, c, involution, a_star, gain, cost })
    }

    pub fn a(&self) -> &LaurentMatrix {
        &self.a
    }

    pub fn b(&self) -> &LaurentMatrix {
        &self.b
    }

    pub fn c(&self) -> &LaurentMatrix {
        &self.c
    }

    pub fn involution(&self) -> InvolutionKind {
        self.involution
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub(crate) fn at(&self, theta: f64) -> PointData {
        PointData {
            a: self.a.eval(theta),
            b: self.b.eval(theta),
            c: self.c.eval(theta),
            a_star: self.a_star.eval(theta),
            gain: self.gain.eval(theta),
            cost: self.cost.eval(theta),
        }
    }

    /// Checks the five hypotheses at every grid angle.
    pub fn check_assumptions(&self, grid: &SampleGrid, tol: f64, exec: Execution) -> AssumptionReport {
        let rows = map_indexed(exec, grid.size(), |j| {
            let pt = self.at(grid.theta(j));
            let b_sq = &pt.b * pt.b.adjoint();
            let c_sq = pt.c.adjoint() * &pt.c;
            [
                spectral_norm(&(&pt.a_star - pt.a.adjoint())),
                spectral_norm(&(&pt.gain - b_sq)),
                spectral_norm(&(&pt.cost - c_sq)),
                f64::from(u8::from(!care::pbh_stabilizable(&pt.a, &pt.b, tol))),
                f64::from(u8::from(!care::pbh_detectable(&pt.a, &pt.c, tol))),
            ]
        });
        let summarize = |idx: usize, pass_if: &dyn Fn(f64) -> bool| {
            let mut worst = AssumptionCheck { pass: true, worst_theta: 0.0, worst_defect: 0.0 };
            for (j, row) in rows.iter().enumerate() {
                if row[idx] > worst.worst_defect {
                    worst.worst_defect = row[idx];
                    worst.worst_theta = grid.theta(j);
                }
            }
            worst.pass = pass_if(worst.worst_defect);
            worst
        };
        let within = |d: f64| d <= tol;
        let none_failed = |d: f64| d == 0.0;
        AssumptionReport {
            a1: summarize(0, &within),
            a2: summarize(1, &within),
            a3: summarize(2, &within),
            a4: summarize(3, &none_failed),
            a5: summarize(4, &none_failed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentElement;

    fn scalar(terms: &[(i64, f64)]) -> LaurentMatrix {
        LaurentMatrix::scalar(LaurentElement::from_real(terms))
    }

    #[test]
    fn grid_validation() {
        assert!(SampleGrid::new(8).is_ok());
        assert!(SampleGrid::new(4).is_err());
        assert!(SampleGrid::new(24).is_err());
        let g = SampleGrid::new(8).unwrap();
        assert!((g.theta(2) - PI / 2.0).abs() < 1e-15);
        assert_eq!(serde_json::from_str::<SampleGrid>(r#"{"n":16}"#).unwrap().size(), 16);
        assert!(serde_json::from_str::<SampleGrid>(r#"{"n":12}"#).is_err());
    }

    #[test]
    fn counterexample_fails_a1_only() {
        let p = FieldProblem::new(
            scalar(&[(1, 1.0)]),
            scalar(&[(0, 1.0)]),
            scalar(&[(0, 1.0)]),
            InvolutionKind::CoeffConjugate,
        )
        .unwrap();
        let r = p.check_assumptions(&SampleGrid::new(64).unwrap(), 1e-10, Execution::Sequential);
        assert!(!r.a1.pass);
        assert!((r.a1.worst_defect - 2.0).abs() < 1e-12);
        assert!((r.a1.worst_theta - PI / 2.0).abs() < 1e-15);
        assert!(r.a2.pass && r.a3.pass && r.a4.pass && r.a5.pass);
        assert_eq!(r.failed(), vec!["a1"]);
    }

    #[test]
    fn revisited_examples_pass() {
        let one = scalar(&[(0, 1.0)]);
        let corrected =
            FieldProblem::new(scalar(&[(-1, 1.0), (1, 1.0)]), one.clone(), one.clone(), InvolutionKind::CoeffConjugate)
                .unwrap();
        let grid = SampleGrid::new(64).unwrap();
        assert!(corrected.check_assumptions(&grid, 1e-10, Execution::Parallel).all_pass());
        let second =
            FieldProblem::new(scalar(&[(1, 1.0)]), one.clone(), one, InvolutionKind::HermitianOnCircle).unwrap();
        assert!(second.check_assumptions(&grid, 1e-10, Execution::Parallel).all_pass());
    }

    #[test]
    fn undetectable_sample_is_flagged() {
        // C = (1 + z)/2 vanishes at θ = π where A = 0 is not stable
        let p = FieldProblem::new(
            scalar(&[(0, 0.0)]),
            scalar(&[(0, 0.0)]),
            scalar(&[(0, 0.5), (1, 0.5)]),
            InvolutionKind::HermitianOnCircle,
        )
        .unwrap();
        let r = p.check_assumptions(&SampleGrid::new(8).unwrap(), 1e-10, Execution::Sequential);
        assert!(!r.a4.pass);
        assert_eq!(r.a4.worst_defect, 1.0);
        assert!(!r.a5.pass);
        assert!((r.a5.worst_theta - PI).abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let one = scalar(&[(0, 1.0)]);
        assert!(FieldProblem::new(
            LaurentMatrix::zeros(1, 2),
            one.clone(),
            one.clone(),
            InvolutionKind::CoeffConjugate
        )
        .is_err());
        assert!(FieldProblem::new(
            one.clone(),
            LaurentMatrix::zeros(2, 1),
            one.clone(),
            InvolutionKind::CoeffConjugate
        )
        .is_err());
        assert!(FieldProblem::new(
            one.clone(),
            one.clone(),
            LaurentMatrix::zeros(1, 2),
            InvolutionKind::CoeffConjugate
        )
        .is_err());
    }
}
