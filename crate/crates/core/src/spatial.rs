//! Finite rings of identical subsystems.
//!
//! A Laurent matrix `M = Σ M_k z^k` acts on a ring of `N` subsystems as the
//! block-circulant matrix whose block `(i, j)` is `Σ_{k ≡ j-i (mod N)} M_k`.
//! Its DFT block-diagonalization has blocks `M̂(2πj/N)`, which ties the ring's
//! spectrum exactly to pointwise spectra on the `N`-th roots of unity.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::algebra::{InvolutionKind, LaurentMatrix, WeightSequence};
use crate::error::SpatialError;
use crate::linalg::{self, spectral_norm, CMat};

fn check_fits(m: &LaurentMatrix, ring: usize) -> Result<(), SpatialError> {
    let support = m.support_bound();
    if (ring as u64) <= 2 * support {
        return Err(SpatialError::SupportTooWide { support, ring });
    }
    Ok(())
}

/// Block-circulant matrix of `M` on a ring of `ring` subsystems; requires
/// `ring > 2 · support(M)` so that no two offsets share a block.
pub fn circulant_truncate(m: &LaurentMatrix, ring: usize) -> Result<CMat, SpatialError> {
    check_fits(m, ring)?;
    Ok(circulant_periodize(m, ring))
}

/// Block-circulant matrix with offsets folded modulo `ring`, for any support.
pub fn circulant_periodize(m: &LaurentMatrix, ring: usize) -> CMat {
    let (r, c) = (m.rows(), m.cols());
    let mut blocks = vec![CMat::zeros(r, c); ring];
    for k in m.offsets() {
        let slot = k.rem_euclid(ring as i64) as usize;
        blocks[slot] += m.coeff_matrix(k);
    }
    let mut out = CMat::zeros(ring * r, ring * c);
    for i in 0..ring {
        for j in 0..ring {
            out.view_mut((i * r, j * c), (r, c)).copy_from(&blocks[(j + ring - i) % ring]);
        }
    }
    out
}

/// Closed-loop ring matrix `circ(A) - circ(B) circ(B⋆ P)`. `A` and `B` must
/// fit the ring; the gain `B⋆ P` is folded.
pub fn closed_loop_ring(
    a: &LaurentMatrix,
    b: &LaurentMatrix,
    p: &LaurentMatrix,
    kind: InvolutionKind,
    ring: usize,
) -> Result<CMat, SpatialError> {
    let block_a = circulant_truncate(a, ring)?;
    let block_b = circulant_truncate(b, ring)?;
    let gain = b.involute(kind).multiply(p)?;
    Ok(block_a - block_b * circulant_periodize(&gain, ring))
}

/// Largest real part of the ring closed-loop spectrum.
pub fn truncated_closed_loop_abscissa(
    a: &LaurentMatrix,
    b: &LaurentMatrix,
    p: &LaurentMatrix,
    kind: InvolutionKind,
    ring: usize,
) -> Result<f64, SpatialError> {
    let closed = closed_loop_ring(a, b, p, kind, ring)?;
    Ok(linalg::spectral_abscissa(&closed).expect("Schur iteration on ring matrix"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainProfile {
    /// `(k, ‖K_k‖, α_k ‖K_k‖)` for every offset of `K = B⋆ P`, ascending.
    pub rows: Vec<(i64, f64, f64)>,
    /// `Σ α_k ‖K_k‖`.
    pub weighted_sum: f64,
}

impl GainProfile {
    /// Largest `‖K_k‖` over `|k| ≥ from`.
    pub fn tail_max(&self, from: u64) -> f64 {
        self.rows.iter().filter(|(k, _, _)| k.unsigned_abs() >= from).map(|&(_, norm, _)| norm).fold(0.0, f64::max)
    }

    /// Writes `k,norm,weighted` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,norm,weighted")?;
        for (k, norm, weighted) in &self.rows {
            writeln!(out, "{k},{norm:.16e},{weighted:.16e}")?;
        }
        Ok(())
    }
}

/// Per-offset spectral norms of the gain `K = B⋆ P`.
pub fn gain_decay_profile(
    b: &LaurentMatrix,
    p: &LaurentMatrix,
    kind: InvolutionKind,
    weight: &WeightSequence,
) -> Result<GainProfile, SpatialError> {
    let gain = b.involute(kind).multiply(p)?;
    let rows: Vec<(i64, f64, f64)> = gain
        .offsets()
        .into_iter()
        .map(|k| {
            let norm = spectral_norm(&gain.coeff_matrix(k));
            (k, norm, weight.value(k) * norm)
        })
        .collect();
    let weighted_sum = rows.iter().map(|r| r.2).sum();
    Ok(GainProfile { rows, weighted_sum })
}

/// Integrates `ẋ = M x` with classical RK4 and returns `(t, ‖x(t)‖)` after
/// every step, starting with `t = 0`. The step is shrunk so that it divides
/// `t_final` exactly.
pub fn integrate_rk4(m: &CMat, x0: &[Complex64], t_final: f64, dt: f64) -> Vec<(f64, f64)> {
    assert!(dt > 0.0 && t_final > 0.0, "need positive dt and horizon");
    let steps = (t_final / dt).ceil() as usize;
    let h = t_final / steps as f64;
    let mut x = nalgebra::DVector::from_column_slice(x0);
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, x.norm()));
    for s in 1..=steps {
        let k1 = m * &x;
        let k2 = m * (&x + &k1 * Complex64::from(h / 2.0));
        let k3 = m * (&x + &k2 * Complex64::from(h / 2.0));
        let k4 = m * (&x + &k3 * Complex64::from(h));
        x += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0);
        out.push((s as f64 * h, x.norm()));
    }
    out
}

/// Simulates the ring closed loop from `x0` (length `ring · n`).
#[allow(clippy::too_many_arguments)]
pub fn simulate_closed_loop(
    a: &LaurentMatrix,
    b: &LaurentMatrix,
    p: &LaurentMatrix,
    kind: InvolutionKind,
    ring: usize,
    x0: &[Complex64],
    t_final: f64,
    dt: f64,
) -> Result<Vec<(f64, f64)>, SpatialError> {
    let expected = ring * a.rows();
    if x0.len() != expected {
        return Err(SpatialError::StateLength { got: x0.len(), expected });
    }
    let closed = closed_loop_ring(a, b, p, kind, ring)?;
    Ok(integrate_rk4(&closed, x0, t_final, dt))
}

/// Writes `t,norm` rows.
pub fn write_simulation_csv<W: Write>(rows: &[(f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "t,norm")?;
    for (t, norm) in rows {
        writeln!(out, "{t:.16e},{norm:.16e}")?;
    }
    Ok(())
}

/// State with a unit impulse in the first coordinate of subsystem `at`.
pub fn unit_impulse(ring: usize, n: usize, at: usize) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); ring * n];
    x[at * n] = Complex64::new(1.0, 0.0);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentElement;

    fn scalar(terms: &[(i64, f64)]) -> LaurentMatrix {
        LaurentMatrix::scalar(LaurentElement::from_real(terms))
    }

    #[test]
    fn truncation_examples() {
        let m = circulant_truncate(&scalar(&[(-1, 1.0), (1, 1.0)]), 4).unwrap();
        let first: Vec<f64> = (0..4).map(|j| m[(0, j)].re).collect();
        assert_eq!(first, vec![0.0, 1.0, 0.0, 1.0]);

        let id = circulant_truncate(&scalar(&[(0, 1.0)]), 3).unwrap();
        assert_eq!(id, CMat::identity(3, 3));

        let shift = circulant_truncate(&scalar(&[(1, 1.0)]), 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expect = if j == (i + 1) % 8 { 1.0 } else { 0.0 };
                assert_eq!(shift[(i, j)].re, expect);
            }
        }
    }

    #[test]
    fn support_too_wide() {
        let m = scalar(&[(-2, 1.0), (2, 1.0)]);
        assert_eq!(circulant_truncate(&m, 4).unwrap_err(), SpatialError::SupportTooWide { support: 2, ring: 4 });
        assert!(circulant_truncate(&m, 5).is_ok());
    }

    #[test]
    fn stable_uncontrolled_ring() {
        let zero = LaurentMatrix::zeros(1, 1);
        let a = scalar(&[(0, -1.0)]);
        let b = scalar(&[(0, 1.0)]);
        for ring in [3, 8, 17] {
            let abscissa = truncated_closed_loop_abscissa(&a, &b, &zero, InvolutionKind::CoeffConjugate, ring).unwrap();
            assert!((abscissa + 1.0).abs() < 1e-12);
        }
        let x0 = unit_impulse(4, 1, 0);
        let traj = simulate_closed_loop(&a, &b, &zero, InvolutionKind::CoeffConjugate, 4, &x0, 2.0, 1e-3).unwrap();
        for (t, norm) in traj {
            assert!((norm - (-t).exp()).abs() <= 1e-6);
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let a = scalar(&[(-1, 1.0), (1, 1.0)]);
        let b = scalar(&[(0, 1.0)]);
        let x0 = vec![Complex64::new(0.0, 0.0); 8];
        let traj = simulate_closed_loop(
            &a,
            &b,
            &LaurentMatrix::zeros(1, 1),
            InvolutionKind::CoeffConjugate,
            8,
            &x0,
            1.0,
            0.01,
        )
        .unwrap();
        assert!(traj.iter().all(|&(_, n)| n == 0.0));
        assert!(simulate_closed_loop(
            &a,
            &b,
            &LaurentMatrix::zeros(1, 1),
            InvolutionKind::CoeffConjugate,
            8,
            &x0[..3],
            1.0,
            0.01
        )
        .is_err());
    }

    #[test]
    fn zero_gain_profile() {
        let prof = gain_decay_profile(
            &scalar(&[(0, 1.0)]),
            &LaurentMatrix::zeros(1, 1),
            InvolutionKind::CoeffConjugate,
            &WeightSequence::Unit,
        )
        .unwrap();
        assert!(prof.rows.iter().all(|r| r.1 == 0.0));
        assert_eq!(prof.weighted_sum, 0.0);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_simulation_csv(&[(0.0, 1.0)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,norm\n0.0000000000000000e0,1.0000000000000000e0\n");
        let prof = GainProfile { rows: vec![(-1, 0.5, 1.0)], weighted_sum: 1.0 };
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,norm,weighted\n-1,5.0000000000000000e-1,1.0000000000000000e0\n");
    }
}
