use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::WeightSequence;

/// Relative magnitude below which product coefficients are dropped.
pub const PRUNE_RELATIVE: f64 = 1e-15;

/// How `f ↦ f⋆` acts on Fourier coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionKind {
    /// `(f⋆)_k = conj(f_k)`, i.e. `f⋆(z) = conj(f(conj z))`.
    CoeffConjugate,
    /// `(f⋆)_k = conj(f_{-k})`, i.e. `f⋆(z) = conj(f(z))` on the circle.
    HermitianOnCircle,
}

impl InvolutionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InvolutionKind::CoeffConjugate => "coeff_conjugate",
            InvolutionKind::HermitianOnCircle => "hermitian_on_circle",
        }
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finitely supported Laurent series `Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentElement {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: impl Into<Complex64>) -> Self {
        Self::from_terms([(k, c.into())])
    }

    /// Repeated offsets are summed; exact zeros are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c: &mut Complex64| *c != Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn from_real(terms: &[(i64, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0))))
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` with a stored coefficient (0 for the zero element).
    pub fn support_bound(&self) -> u64 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ |f_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn wiener_norm(&self, weight: &WeightSequence) -> f64 {
        self.terms().map(|(k, c)| weight.value(k) * c.norm()).sum()
    }

    /// Gelfand transform at `z = e^{iθ}`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// Convolution product, pruned at [`PRUNE_RELATIVE`] of the largest coefficient.
    pub fn multiply(&self, other: &LaurentElement) -> LaurentElement {
        let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (j, a) in self.terms() {
            for (l, b) in other.terms() {
                *out.entry(j + l).or_default() += a * b;
            }
        }
        let mut product = LaurentElement { coeffs: out };
        product.prune(PRUNE_RELATIVE);
        product
    }

    /// Drops coefficients with `|c| ≤ rel · max |c|`.
    pub fn prune(&mut self, rel: f64) {
        let cutoff = rel * self.max_abs();
        self.coeffs.retain(|_, c| c.norm() > cutoff && c.norm() > 0.0);
    }

    pub fn involute(&self, kind: InvolutionKind) -> LaurentElement {
        let coeffs = match kind {
            InvolutionKind::CoeffConjugate => self.coeffs.iter().map(|(&k, c)| (k, c.conj())).collect(),
            InvolutionKind::HermitianOnCircle => self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect(),
        };
        LaurentElement { coeffs }
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn sub(&self, other: &LaurentElement) -> LaurentElement {
        Self::from_terms(self.terms().chain(other.terms().map(|(k, c)| (k, -c))))
    }

    pub fn scale(&self, s: Complex64) -> LaurentElement {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    /// Largest coefficientwise gap `max_k |f_k - g_k|`.
    pub fn max_coeff_diff(&self, other: &LaurentElement) -> f64 {
        self.sub(other).max_abs()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRepr {
    k: Vec<(i64, f64, f64)>,
}

impl Serialize for LaurentElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ElementRepr { k: self.terms().map(|(k, c)| (k, c.re, c.im)).collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ElementRepr::deserialize(deserializer)?;
        let mut coeffs = BTreeMap::new();
        for (k, re, im) in repr.k {
            if !re.is_finite() || !im.is_finite() {
                return Err(D::Error::custom(format!("non-finite coefficient at offset {k}")));
            }
            if coeffs.insert(k, Complex64::new(re, im)).is_some() {
                return Err(D::Error::custom(format!("duplicate offset {k}")));
            }
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(LaurentElement { coeffs })
    }
}
