use serde::{Deserialize, Serialize};

use super::recovery::CoefficientLevel;
use super::SampleGrid;
use crate::algebra::{LaurentMatrix, WeightSequence};
use crate::error::FieldError;
use crate::linalg::{self, CMat};
use crate::par::{map_indexed, Execution};

/// Relative growth of the last doubling below which a weighted sum counts as settled.
pub const PLATEAU_GROWTH: f64 = 1e-6;
/// Top-octave coefficient size required for membership.
pub const ALIASING_LIMIT: f64 = 1e-8;
/// Increment ratio at or above which growth is read as divergence.
pub const DIVERGENCE_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    /// `sup_θ max Re spec(Â(θ) - B̂(θ) B̂(θ)^H Π(θ))` over the grid.
    pub abscissa: f64,
    pub worst_theta: f64,
    pub margin_pass: bool,
    pub per_theta: Vec<f64>,
}

/// Closed-loop spectral abscissa over the sampled spectrum.
pub fn stability_certificate(
    a: &LaurentMatrix,
    b: &LaurentMatrix,
    grid: &SampleGrid,
    samples: &[CMat],
    tol_stab: f64,
    exec: Execution,
) -> Result<StabilityCertificate, FieldError> {
    let per_theta = map_indexed(exec, grid.size(), |j| {
        let theta = grid.theta(j);
        let bj = b.eval(theta);
        let closed = a.eval(theta) - &bj * bj.adjoint() * &samples[j];
        linalg::spectral_abscissa(&closed).map_err(|source| FieldError::PointwiseSolveFailure { theta, source })
    })
    .into_iter()
    .collect::<Result<Vec<f64>, _>>()?;
    let (worst, abscissa) =
        per_theta
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    Ok(StabilityCertificate { abscissa, worst_theta: grid.theta(worst), margin_pass: abscissa < -tol_stab, per_theta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedMember,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::CertifiedMember => "certified_member",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Weighted partial sums `Σ_{|k|≤K} α_k |p_k|` along a doubling ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTrend {
    pub weight: WeightSequence,
    /// `(K, sum)` with `K = N/2` for the `N`-point level.
    pub partial_sums: Vec<(u64, f64)>,
    /// `(S_last - S_prev) / S_last`, 0 when everything vanishes.
    pub relative_growth: f64,
    /// Ratio of the last two increments; `None` when the earlier one is not positive.
    pub tail_ratio: Option<f64>,
    pub verdict: Verdict,
}

impl SeriesTrend {
    fn from_levels(levels: &[CoefficientLevel], weight: WeightSequence, aliasing: f64) -> Self {
        let partial_sums: Vec<(u64, f64)> =
            levels.iter().map(|l| ((l.grid_size() / 2) as u64, l.weighted_sum(&weight))).collect();
        let sums: Vec<f64> = partial_sums.iter().map(|&(_, s)| s).collect();
        let len = sums.len();
        let (s2, s1, s0) = (sums[len - 3], sums[len - 2], sums[len - 1]);
        let relative_growth = if s0 == 0.0 { 0.0 } else { (s0 - s1).abs() / s0.abs() };
        let (inc_prev, inc_last) = (s1 - s2, s0 - s1);
        let tail_ratio = (inc_prev > 0.0).then(|| inc_last / inc_prev);
        let still_climbing = inc_prev > 0.0 && inc_last > 0.0;

        let verdict = if relative_growth < PLATEAU_GROWTH && aliasing < ALIASING_LIMIT {
            Verdict::CertifiedMember
        } else if still_climbing
            && relative_growth >= PLATEAU_GROWTH
            && tail_ratio.is_some_and(|r| r >= DIVERGENCE_RATIO)
        {
            Verdict::Diverging
        } else {
            Verdict::Inconclusive
        };
        Self { weight, partial_sums, relative_growth, tail_ratio, verdict }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCertificate {
    #[serde(flatten)]
    pub primary: SeriesTrend,
    /// Top-octave coefficient size on the finest level.
    pub aliasing_estimate: f64,
    /// Sums with `α_k = 1 + |k|`: absolute convergence of the differentiated series.
    pub c1_probe: Option<SeriesTrend>,
    /// Diverging when either trend diverges, otherwise the primary verdict.
    pub overall: Verdict,
}

impl DecayCertificate {
    pub fn verdict(&self) -> Verdict {
        self.overall
    }
}

/// Classifies membership of the recovered series in the weighted algebra
/// from a doubling ladder (coarsest first).
pub fn decay_certificate(
    levels: &[CoefficientLevel],
    weight: WeightSequence,
    c1_probe: bool,
) -> Result<DecayCertificate, FieldError> {
    if levels.len() < 3 {
        return Err(FieldError::InsufficientLevels(levels.len()));
    }
    let aliasing_estimate = levels[levels.len() - 1].aliasing_estimate();
    let primary = SeriesTrend::from_levels(levels, weight, aliasing_estimate);
    let c1_probe =
        c1_probe.then(|| SeriesTrend::from_levels(levels, WeightSequence::Polynomial { s: 1.0 }, aliasing_estimate));
    let overall = if primary.verdict == Verdict::Diverging
        || c1_probe.as_ref().is_some_and(|p| p.verdict == Verdict::Diverging)
    {
        Verdict::Diverging
    } else {
        primary.verdict
    };
    Ok(DecayCertificate { primary, aliasing_estimate, c1_probe, overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::recovery::levels_from_samples;
    use num_complex::Complex64;

    fn ladder(n: usize, f: impl Fn(f64) -> Complex64) -> Vec<CoefficientLevel> {
        let g = SampleGrid::new(n).unwrap();
        let s: Vec<CMat> = g.thetas().into_iter().map(|t| CMat::from_element(1, 1, f(t))).collect();
        levels_from_samples(&s)
    }

    #[test]
    fn zero_is_member() {
        let cert = decay_certificate(&ladder(64, |_| Complex64::new(0.0, 0.0)), WeightSequence::Unit, true).unwrap();
        assert_eq!(cert.verdict(), Verdict::CertifiedMember);
        assert!(cert.primary.partial_sums.iter().all(|&(_, s)| s == 0.0));
    }

    #[test]
    fn too_few_levels() {
        let levels = ladder(64, |t| Complex64::new(t.cos(), 0.0));
        assert!(matches!(
            decay_certificate(&levels[..2], WeightSequence::Unit, false),
            Err(FieldError::InsufficientLevels(2))
        ));
    }

    #[test]
    fn smooth_function_is_member_jump_is_not() {
        let smooth = ladder(256, |t| Complex64::new(1.0 / (2.0 - t.cos()), 0.0));
        let cert = decay_certificate(&smooth, WeightSequence::Polynomial { s: 2.0 }, true).unwrap();
        assert_eq!(cert.verdict(), Verdict::CertifiedMember);

        // |sin θ| has coefficients ~ 1/k², so Σ (1+|k|)|p_k| grows like log K
        let kink = ladder(4096, |t| Complex64::new(t.sin().abs(), 0.0));
        let cert = decay_certificate(&kink, WeightSequence::Unit, true).unwrap();
        assert_eq!(cert.primary.verdict, Verdict::Inconclusive);
        assert_eq!(cert.c1_probe.as_ref().unwrap().verdict, Verdict::Diverging);
        assert_eq!(cert.verdict(), Verdict::Diverging);
    }
}
