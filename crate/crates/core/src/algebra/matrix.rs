use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{InvolutionKind, LaurentElement, WeightSequence};
use crate::error::AlgebraError;
use crate::linalg::CMat;

/// Row-major grid of Laurent series; the matrices `A`, `B`, `C`, `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentElement>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentElement>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| LaurentElement::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { LaurentElement::constant(1.0) } else { LaurentElement::zero() })
    }

    /// 1×1 matrix.
    pub fn scalar(f: LaurentElement) -> Self {
        Self { rows: 1, cols: 1, entries: vec![f] }
    }

    /// Constant (offset-0) matrix.
    pub fn from_constant(m: &CMat) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| LaurentElement::constant(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentElement {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LaurentElement] {
        &self.entries
    }

    /// Common support bound of all entries.
    pub fn support_bound(&self) -> u64 {
        self.entries.iter().map(LaurentElement::support_bound).max().unwrap_or(0)
    }

    /// Coefficient matrix at offset `k`.
    pub fn coeff_matrix(&self, k: i64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    /// Offsets carrying a nonzero coefficient in some entry, ascending.
    pub fn offsets(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = self.entries.iter().flat_map(|e| e.terms().map(|(k, _)| k)).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn eval(&self, theta: f64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(theta))
    }

    /// Involuted transpose: entry `(i, j)` is `m_{ji}⋆`.
    pub fn involute(&self, kind: InvolutionKind) -> LaurentMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).involute(kind))
    }

    pub fn multiply(&self, other: &LaurentMatrix) -> Result<LaurentMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentElement::zero();
            for l in 0..self.cols {
                acc = acc.add(&self.get(i, l).multiply(other.get(l, j)));
            }
            acc
        }))
    }

    pub fn sub(&self, other: &LaurentMatrix) -> Result<LaurentMatrix, AlgebraError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j))))
    }

    /// Max over rows of the summed entry norms.
    pub fn wiener_norm(&self, weight: &WeightSequence) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).wiener_norm(weight)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_coeff_diff(&self, other: &LaurentMatrix) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.max_coeff_diff(b)).fold(0.0, f64::max)
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentElement) -> LaurentElement) -> LaurentMatrix {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, s: Complex64) -> LaurentMatrix {
        self.map_entries(|e| e.scale(s))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<LaurentElement>>,
}

impl Serialize for LaurentMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom(format!("entries do not form a {}x{} grid", repr.rows, repr.cols)));
        }
        Ok(LaurentMatrix { rows: repr.rows, cols: repr.cols, entries: repr.entries.into_iter().flatten().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> LaurentElement {
        LaurentElement::from_real(&[(1, 1.0)])
    }

    #[test]
    fn involute_scalar_counterexample() {
        let m = LaurentMatrix::scalar(z());
        assert_eq!(m.involute(InvolutionKind::CoeffConjugate), m);
    }

    #[test]
    fn involute_transposes() {
        let m = LaurentMatrix::from_fn(2, 3, |i, j| LaurentElement::monomial(j as i64, Complex64::new(i as f64, 1.0)));
        let s = m.involute(InvolutionKind::HermitianOnCircle);
        assert_eq!((s.rows(), s.cols()), (3, 2));
        assert_eq!(s.get(2, 1), &LaurentElement::monomial(-2, Complex64::new(1.0, -1.0)));
    }

    #[test]
    fn eval_upper_triangular() {
        let m =
            LaurentMatrix::new(2, 2, vec![z(), LaurentElement::constant(1.0), LaurentElement::zero(), z()]).unwrap();
        let e = m.eval(0.0);
        let expect = CMat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0].map(|x| Complex64::new(x, 0.0)));
        assert!((e - expect).norm() < 1e-15);
    }

    #[test]
    fn multiply_and_mismatch() {
        let a = LaurentMatrix::scalar(z());
        let b = LaurentMatrix::scalar(LaurentElement::from_real(&[(-1, 1.0)]));
        assert_eq!(a.multiply(&b).unwrap(), LaurentMatrix::identity(1));
        let wide = LaurentMatrix::zeros(1, 2);
        assert!(wide.multiply(&wide).is_err());
    }

    #[test]
    fn json_grid() {
        let m = LaurentMatrix::from_fn(1, 2, |_, j| LaurentElement::from_real(&[(j as i64, 1.0)]));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"entries":[[{"k":[[0,1.0,0.0]]},{"k":[[1,1.0,0.0]]}]]}"#);
        let back: LaurentMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<LaurentMatrix>(r#"{"rows":2,"cols":1,"entries":[[{"k":[]}]]}"#).is_err());
    }

    #[test]
    fn row_sum_norm() {
        let m = LaurentMatrix::from_fn(2, 2, |i, _| LaurentElement::constant((i + 1) as f64));
        assert_eq!(m.wiener_norm(&WeightSequence::Unit), 4.0);
    }
}
