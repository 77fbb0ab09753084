//! Fourier coefficient recovery from equispaced samples.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::algebra::{LaurentElement, LaurentMatrix, WeightSequence};
use crate::linalg::CMat;

/// All `N` discrete Fourier coefficients of a matrix-valued function sampled
/// at `2πj/N`, offsets `-N/2 ..= N/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientLevel {
    n: usize,
    rows: usize,
    cols: usize,
    /// Per entry (row-major), coefficients in FFT order: index `k mod N`.
    spectra: Vec<Vec<Complex64>>,
}

impl CoefficientLevel {
    /// `p_k = (1/N) Σ_j Π(θ_j) e^{-ikθ_j}` entrywise.
    pub fn from_samples(samples: &[CMat]) -> Self {
        let n = samples.len();
        assert!(n > 0, "no samples");
        let (rows, cols) = samples[0].shape();
        let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
        let scale = 1.0 / n as f64;
        let mut spectra = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut buf: Vec<Complex64> = samples.iter().map(|s| s[(i, j)]).collect();
                fft.process(&mut buf);
                buf.iter_mut().for_each(|c| *c *= scale);
                spectra.push(buf);
            }
        }
        Self { n, rows, cols, spectra }
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// Coefficient of entry `(i, j)` at offset `k`, taken modulo `N`.
    pub fn coeff(&self, i: usize, j: usize, k: i64) -> Complex64 {
        let idx = k.rem_euclid(self.n as i64) as usize;
        self.spectra[i * self.cols + j][idx]
    }

    /// Largest retained offset, `N/2 - 1`.
    pub fn retained_bound(&self) -> i64 {
        (self.n / 2) as i64 - 1
    }

    /// Series with offsets `|k| ≤ N/2 - 1`; exact zeros are dropped.
    pub fn to_laurent(&self) -> LaurentMatrix {
        let bound = self.retained_bound();
        LaurentMatrix::from_fn(self.rows, self.cols, |i, j| {
            LaurentElement::from_terms((-bound..=bound).map(|k| (k, self.coeff(i, j, k))))
        })
    }

    /// Values of [`to_laurent`](Self::to_laurent) at the `N` grid angles,
    /// by inverse FFT.
    pub fn retained_on_grid(&self) -> Vec<CMat> {
        let n = self.n;
        let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n);
        let mut out = vec![CMat::zeros(self.rows, self.cols); n];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut buf = self.spectra[i * self.cols + j].clone();
                if n.is_multiple_of(2) {
                    buf[n / 2] = Complex64::new(0.0, 0.0);
                }
                ifft.process(&mut buf);
                for (t, v) in buf.into_iter().enumerate() {
                    out[t][(i, j)] = v;
                }
            }
        }
        out
    }

    /// Largest entrywise coefficient magnitude with `N/4 < |k| ≤ N/2`.
    pub fn aliasing_estimate(&self) -> f64 {
        let half = (self.n / 2) as i64;
        let quarter = (self.n / 4) as i64;
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in (quarter + 1)..=half {
                    worst = worst.max(self.coeff(i, j, k).norm()).max(self.coeff(i, j, -k).norm());
                }
            }
        }
        worst
    }

    /// `max_{entries} Σ_{|k| ≤ N/2-1} α_k |p_k|`.
    pub fn weighted_sum(&self, weight: &WeightSequence) -> f64 {
        let bound = self.retained_bound();
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s: f64 = (-bound..=bound).map(|k| weight.value(k) * self.coeff(i, j, k).norm()).sum();
                worst = worst.max(s);
            }
        }
        worst
    }
}

/// Doubling ladder of coefficient levels obtained by subsampling: the
/// `N/2^r` grid is every `2^r`-th sample of the `N` grid. Levels run from
/// `min(8, N/4)` up to `N`.
pub fn levels_from_samples(samples: &[CMat]) -> Vec<CoefficientLevel> {
    let n = samples.len();
    let lowest = (n / 4).clamp(1, 8);
    let mut levels = Vec::new();
    let mut m = lowest;
    while m <= n {
        let stride = n / m;
        let sub: Vec<CMat> = samples.iter().step_by(stride).cloned().collect();
        levels.push(CoefficientLevel::from_samples(&sub));
        m *= 2;
    }
    levels
}
