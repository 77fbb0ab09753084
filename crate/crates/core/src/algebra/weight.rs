use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseWeightError;

/// Even weight `α_k` defining the norm `Σ α_k |f_k|` of a Wiener algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "WeightRepr")]
pub enum WeightSequence {
    /// `α_k = 1`.
    #[default]
    Unit,
    /// `α_k = (1 + |k|)^s`, `s ≥ 0`.
    Polynomial { s: f64 },
    /// `α_k = exp(a |k|^b)`, `a > 0`, `0 ≤ b < 1`.
    Subexponential { a: f64, b: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightRepr {
    kind: String,
    s: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
}

impl TryFrom<WeightRepr> for WeightSequence {
    type Error = ParseWeightError;

    fn try_from(r: WeightRepr) -> Result<Self, Self::Error> {
        let missing = |name: &str| ParseWeightError::Parameter(format!("{} weight needs \"{name}\"", r.kind));
        let extra = || ParseWeightError::Parameter(format!("unexpected parameter for {} weight", r.kind));
        let w = match r.kind.as_str() {
            "unit" if r.s.is_none() && r.a.is_none() && r.b.is_none() => WeightSequence::Unit,
            "polynomial" if r.a.is_none() && r.b.is_none() => {
                WeightSequence::Polynomial { s: r.s.ok_or_else(|| missing("s"))? }
            }
            "subexponential" if r.s.is_none() => WeightSequence::Subexponential {
                a: r.a.ok_or_else(|| missing("a"))?,
                b: r.b.ok_or_else(|| missing("b"))?,
            },
            "unit" | "polynomial" | "subexponential" => return Err(extra()),
            other => return Err(ParseWeightError::Syntax(other.to_string())),
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightReport {
    pub even_ok: bool,
    pub submultiplicative_ok: bool,
    /// `α_K^{1/K}`; tends to 1 for weights satisfying the GRS condition.
    pub grs_estimate: f64,
}

impl WeightSequence {
    /// Rejects parameters outside the admissible ranges of each kind.
    pub fn validate(&self) -> Result<(), ParseWeightError> {
        match *self {
            WeightSequence::Unit => Ok(()),
            WeightSequence::Polynomial { s } if s.is_finite() && s >= 0.0 => Ok(()),
            WeightSequence::Polynomial { s } => {
                Err(ParseWeightError::Parameter(format!("polynomial exponent must be finite and nonnegative, got {s}")))
            }
            WeightSequence::Subexponential { a, b } if a.is_finite() && a > 0.0 && (0.0..1.0).contains(&b) => Ok(()),
            WeightSequence::Subexponential { a, b } => Err(ParseWeightError::Parameter(format!(
                "subexponential weight needs a > 0 and 0 <= b < 1, got a={a}, b={b}"
            ))),
        }
    }

    pub fn value(&self, k: i64) -> f64 {
        let m = k.unsigned_abs() as f64;
        match *self {
            WeightSequence::Unit => 1.0,
            WeightSequence::Polynomial { s } => (1.0 + m).powf(s),
            WeightSequence::Subexponential { a, b } => (a * m.powf(b)).exp(),
        }
    }

    /// Scans all `|k|, |l| ≤ K` for evenness and submultiplicativity.
    pub fn check(&self, max_offset: u32) -> WeightReport {
        assert!(max_offset >= 2, "weight check needs K >= 2");
        let k_max = i64::from(max_offset);
        let mut even_ok = true;
        let mut submultiplicative_ok = true;
        for k in -k_max..=k_max {
            let ak = self.value(k);
            if ak != self.value(-k) {
                even_ok = false;
            }
            for l in -k_max..=k_max {
                let bound = ak * self.value(l);
                if self.value(k + l) > bound * (1.0 + 1e-12) {
                    submultiplicative_ok = false;
                }
            }
        }
        WeightReport { even_ok, submultiplicative_ok, grs_estimate: self.value(k_max).powf(1.0 / k_max as f64) }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSequence::Unit => write!(f, "unit"),
            WeightSequence::Polynomial { s } => write!(f, "poly:{s}"),
            WeightSequence::Subexponential { a, b } => write!(f, "subexp:{a},{b}"),
        }
    }
}

/// Parses `unit`, `poly:<s>` or `subexp:<a>,<b>`.
impl FromStr for WeightSequence {
    type Err = ParseWeightError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        let number = |text: &str| text.trim().parse::<f64>().map_err(|_| ParseWeightError::Syntax(spec.to_string()));
        let weight = if spec == "unit" {
            WeightSequence::Unit
        } else if let Some(rest) = spec.strip_prefix("poly:") {
            WeightSequence::Polynomial { s: number(rest)? }
        } else if let Some(rest) = spec.strip_prefix("subexp:") {
            let (a, b) = rest.split_once(',').ok_or_else(|| ParseWeightError::Syntax(spec.to_string()))?;
            WeightSequence::Subexponential { a: number(a)?, b: number(b)? }
        } else {
            return Err(ParseWeightError::Syntax(spec.to_string()));
        };
        weight.validate()?;
        Ok(weight)
    }
}
