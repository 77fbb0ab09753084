//! Test oracles that do not share code paths with the library: Gauss-Legendre
//! quadrature for Fourier coefficients and a Taylor matrix exponential.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use riccati_wiener::algebra::{LaurentElement, LaurentMatrix};

pub type CMat = DMatrix<Complex64>;

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫_lo^hi f` on `panels` equal panels with an `order`-point rule.
pub fn integrate(f: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64, panels: usize, order: usize) -> Complex64 {
    let rule = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            acc += f(mid + 0.5 * h * x) * (w * 0.5 * h);
        }
    }
    acc
}

/// Integral over `[lo, hi]` with panels graded geometrically toward both
/// endpoints, for integrands with `sqrt`-type endpoint singularities.
pub fn integrate_graded(f: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64, inner_panels: usize) -> Complex64 {
    let len = hi - lo;
    let mut acc = Complex64::new(0.0, 0.0);
    let edge = 0.05 * len;
    // geometric layers toward each endpoint
    let mut outer = edge;
    for _ in 0..60 {
        let inner = outer * 0.3;
        acc += integrate(f, lo + inner, lo + outer, 1, 24);
        acc += integrate(f, hi - outer, hi - inner, 1, 24);
        outer = inner;
    }
    acc + integrate(f, lo + edge, hi - edge, inner_panels, 16)
}

/// `(1/2π) ∫_0^{2π} f(θ) e^{-ikθ} dθ` by composite Gauss-Legendre.
pub fn fourier_coeff(f: &dyn Fn(f64) -> Complex64, k: i64, panels: usize) -> Complex64 {
    let g = |t: f64| f(t) * Complex64::from_polar(1.0, -(k as f64) * t);
    integrate(&g, 0.0, 2.0 * PI, panels, 16) / (2.0 * PI)
}

/// Fourier coefficient of a function whose only singularities sit at `breaks`.
pub fn fourier_coeff_split(f: &dyn Fn(f64) -> Complex64, k: i64, breaks: &[f64], inner_panels: usize) -> Complex64 {
    let g = |t: f64| f(t) * Complex64::from_polar(1.0, -(k as f64) * t);
    let mut pts = vec![0.0];
    pts.extend_from_slice(breaks);
    pts.push(2.0 * PI);
    pts.windows(2).map(|w| integrate_graded(&g, w[0], w[1], inner_panels)).sum::<Complex64>() / (2.0 * PI)
}

/// `exp(M t)` by scaling and squaring a 30-term Taylor series.
pub fn expm(m: &CMat, t: f64) -> CMat {
    let n = m.nrows();
    let norm = (m * Complex64::from(t)).norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = m * Complex64::from(t / 2f64.powi(squarings as i32));
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..30 {
        term = &term * &a / Complex64::from(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Uniform sample from the closed unit disc.
pub fn random_in_disc<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = random_complex(rng);
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Laurent polynomial with offsets in `-support..=support` and unit-disc coefficients.
pub fn random_laurent<R: Rng>(rng: &mut R, support: i64) -> LaurentElement {
    let mut terms = Vec::new();
    for k in -support..=support {
        if rng.random_bool(0.7) {
            terms.push((k, random_in_disc(rng)));
        }
    }
    LaurentElement::from_terms(terms)
}

pub fn random_laurent_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, support: i64) -> LaurentMatrix {
    LaurentMatrix::from_fn(rows, cols, |_, _| random_laurent(rng, support))
}

/// Max |p_k - oracle| over the listed offsets, for a scalar series.
pub fn max_coeff_gap(p: &LaurentElement, oracle: &dyn Fn(i64) -> Complex64, ks: &[i64]) -> f64 {
    ks.iter().map(|&k| (p.coeff(k) - oracle(k)).norm()).fold(0.0, f64::max)
}

/// Greedy nearest-neighbour matching distance between equal-size multisets.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
