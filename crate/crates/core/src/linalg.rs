//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CareError;

pub type CMat = DMatrix<Complex64>;

const SCHUR_MAX_ITER: usize = 10_000;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from a row-major slice of reals.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMat {
    CMat::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Largest singular value (0 for empty matrices).
pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Number of singular values above `tol · max(σ_max, 1)`.
pub fn numerical_rank(m: &CMat, tol: f64) -> usize {
    let sv = singular_values(m);
    let largest = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * largest.max(1.0)).count()
}

/// `σ_max / σ_min`; infinite for singular input.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = singular_values(m);
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest == 0.0 {
        f64::INFINITY
    } else {
        largest / smallest
    }
}

/// Complex Schur form `m = Q T Q^H` with `T` upper triangular.
pub fn schur(m: &CMat) -> Result<(CMat, CMat), CareError> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CareError::NonFinite);
    }
    let (q, mut t) = m.clone().try_schur(f64::EPSILON, SCHUR_MAX_ITER).ok_or(CareError::SchurFailed)?.unpack();
    for j in 0..t.ncols() {
        for i in (j + 1)..t.nrows() {
            t[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok((q, t))
}

pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>, CareError> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal().iter().copied().collect())
}

/// Max real part of the spectrum.
pub fn spectral_abscissa(m: &CMat) -> Result<f64, CareError> {
    Ok(eigenvalues(m)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Exchanges the diagonal entries `k` and `k + 1` of a triangular Schur
/// factor with a unitary rotation, updating `q` so that `Q T Q^H` is unchanged.
fn swap_adjacent(q: &mut CMat, t: &mut CMat, k: usize) {
    let n = t.nrows();
    let (t11, t22, t12) = (t[(k, k)], t[(k + 1, k + 1)], t[(k, k + 1)]);
    if t11 == t22 {
        return;
    }
    // Eigenvector of the 2×2 block for t22; becomes the first Schur vector.
    let x1 = t12;
    let x2 = t22 - t11;
    let r = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    let (u11, u21) = (x1 / r, x2 / r);
    let (u12, u22) = (-u21.conj(), u11.conj());

    // T <- U^H T on rows k, k+1
    for j in k..n {
        let (a, b) = (t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = u11.conj() * a + u21.conj() * b;
        t[(k + 1, j)] = u12.conj() * a + u22.conj() * b;
    }
    // T <- T U on columns k, k+1
    for i in 0..=(k + 1) {
        let (a, b) = (t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = a * u11 + b * u21;
        t[(i, k + 1)] = a * u12 + b * u22;
    }
    for i in 0..n {
        let (a, b) = (q[(i, k)], q[(i, k + 1)]);
        q[(i, k)] = a * u11 + b * u21;
        q[(i, k + 1)] = a * u12 + b * u22;
    }
    t[(k + 1, k)] = Complex64::new(0.0, 0.0);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Reorders a complex Schur form so that the eigenvalues accepted by
/// `select` lead the diagonal. Returns how many were selected; the first
/// that many columns of `q` span the matching invariant subspace.
pub fn reorder_schur(q: &mut CMat, t: &mut CMat, select: impl Fn(Complex64) -> bool) -> usize {
    let mask = t.diagonal().iter().map(|&z| select(z)).collect();
    reorder_schur_mask(q, t, mask)
}

/// Like [`reorder_schur`] with the selection given per diagonal position.
pub fn reorder_schur_mask(q: &mut CMat, t: &mut CMat, mut mask: Vec<bool>) -> usize {
    let mut placed = 0;
    for i in 0..t.nrows() {
        if mask[i] {
            for k in (placed..i).rev() {
                swap_adjacent(q, t, k);
                mask.swap(k, k + 1);
            }
            placed += 1;
        }
    }
    placed
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn hermitian_min_eig(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    hermitian_part(m).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Solves `T^H Y + Y T = F` for upper-triangular `T` by forward substitution.
/// The diagonal divisors are `conj(λ_i) + λ_j`.
fn triangular_lyapunov(t: &CMat, f: &CMat) -> CMat {
    let n = t.nrows();
    let mut y = CMat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut rhs = f[(i, j)];
            for k in 0..i {
                rhs -= t[(k, i)].conj() * y[(k, j)];
            }
            for k in 0..j {
                rhs -= y[(i, k)] * t[(k, j)];
            }
            y[(i, j)] = rhs / (t[(i, i)].conj() + t[(j, j)]);
        }
    }
    y
}

/// Solves `M^H X + X M = R` through the Schur form of `M`.
pub fn solve_lyapunov(m: &CMat, r: &CMat) -> Result<CMat, CareError> {
    let (q, t) = schur(m)?;
    let f = q.adjoint() * r * &q;
    let y = triangular_lyapunov(&t, &f);
    Ok(&q * y * q.adjoint())
}

/// `min |conj(λ) + μ|` over all eigenvalue pairs: the smallest eigenvalue
/// modulus of `X ↦ M^H X + X M`.
pub fn lyapunov_margin(eigs: &[Complex64]) -> f64 {
    eigs.iter().flat_map(|l| eigs.iter().map(move |m| (l.conj() + m).norm())).fold(f64::INFINITY, f64::min)
}

/// Pairs two eigenvalue lists greedily by nearest neighbour and returns the
/// largest pairing distance; infinite on length mismatch.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
