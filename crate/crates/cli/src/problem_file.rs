//! Problem file schema. Every object rejects unknown keys; dimension fields
//! must agree with the matrix payloads.

use serde::Deserialize;

use riccati_wiener::algebra::{InvolutionKind, LaurentMatrix, WeightSequence};
use riccati_wiener::field::{FieldProblem, SampleGrid};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: LaurentMatrix,
    #[serde(rename = "B")]
    pub b: LaurentMatrix,
    #[serde(rename = "C")]
    pub c: LaurentMatrix,
    pub involution: InvolutionKind,
    #[serde(default)]
    pub weight: WeightSequence,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub n0: usize,
    pub n_max: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n0: 16, n_max: 1024 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub tol: f64,
    pub tol_stab: f64,
    pub continuity_target: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: 1e-10, tol_stab: 1e-8, continuity_target: 0.05 }
    }
}

/// 1-based line of the first `"key":` in `text`, or 1.
fn line_of_key(text: &str, key: &str) -> usize {
    let quoted = format!("\"{key}\"");
    let mut from = 0;
    while let Some(pos) = text[from..].find(&quoted) {
        let at = from + pos;
        let rest = text[at + quoted.len()..].trim_start();
        if rest.starts_with(':') {
            return text[..at].matches('\n').count() + 1;
        }
        from = at + quoted.len();
    }
    1
}

/// `origin:line:col: message` from a serde_json failure.
pub fn json_error(origin: &str, err: &serde_json::Error) -> CliError {
    let text = err.to_string();
    let msg = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m);
    CliError::parse(format!("{origin}:{}:{}: {msg}", err.line(), err.column()))
}

impl ProblemFile {
    pub fn parse(origin: &str, text: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| json_error(origin, &e))?;
        file.validate(origin, text)?;
        Ok(file)
    }

    fn validate(&self, origin: &str, text: &str) -> Result<(), CliError> {
        let fail = |key: &str, msg: String| CliError::parse(format!("{origin}:{}: {msg}", line_of_key(text, key)));
        let shapes = [
            ("A", &self.a, self.n, self.n, "n x n"),
            ("B", &self.b, self.n, self.m, "n x m"),
            ("C", &self.c, self.p, self.n, "p x n"),
        ];
        for (key, mat, rows, cols, expect) in shapes {
            if mat.rows() != rows || mat.cols() != cols {
                return Err(fail(
                    key,
                    format!("{key} is {}x{}, expected {expect} = {rows}x{cols}", mat.rows(), mat.cols()),
                ));
            }
        }
        if self.n == 0 {
            return Err(fail("n", "n must be positive".into()));
        }
        for (key, v) in [("n0", self.grid.n0), ("n_max", self.grid.n_max)] {
            if SampleGrid::new(v).is_err() {
                return Err(fail(key, format!("{key} = {v} is not a power of two >= 8")));
            }
        }
        if self.grid.n0 > self.grid.n_max {
            return Err(fail("n0", format!("n0 = {} exceeds n_max = {}", self.grid.n0, self.grid.n_max)));
        }
        let t = &self.tolerances;
        for (key, v) in [("tol", t.tol), ("tol_stab", t.tol_stab)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(fail(key, format!("{key} must be positive and finite")));
            }
        }
        if !(t.continuity_target.is_finite() && t.continuity_target >= 0.0) {
            return Err(fail("continuity_target", "continuity_target must be non-negative".into()));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<FieldProblem, CliError> {
        FieldProblem::new(self.a.clone(), self.b.clone(), self.c.clone(), self.involution)
            .map_err(|e| CliError::parse(e.to_string()))
    }
}
