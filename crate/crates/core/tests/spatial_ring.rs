mod common;

use std::f64::consts::PI;

use common::{expm, match_distance, random_laurent_matrix, CMat};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riccati_wiener::algebra::{InvolutionKind, LaurentMatrix, WeightSequence};
use riccati_wiener::catalog;
use riccati_wiener::field::{FieldOptions, SampleGrid};
use riccati_wiener::linalg::eigenvalues;
use riccati_wiener::spatial::{
    circulant_truncate, closed_loop_ring, gain_decay_profile, simulate_closed_loop, truncated_closed_loop_abscissa,
    unit_impulse,
};

fn corrected_p() -> LaurentMatrix {
    catalog::corrected().solve(&SampleGrid::new(256).unwrap(), &FieldOptions::default()).unwrap().p
}

fn symbol_spectrum(m: &LaurentMatrix, ring: usize) -> Vec<Complex64> {
    (0..ring).flat_map(|j| eigenvalues(&m.eval(2.0 * PI * j as f64 / ring as f64)).unwrap()).collect()
}

#[test]
fn circulant_spectrum_is_the_sampled_symbol_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ring in [5, 8, 9] {
        for _ in 0..5 {
            let m = random_laurent_matrix(&mut rng, 2, 2, 2);
            let circ = circulant_truncate(&m, ring).unwrap();
            let dist = match_distance(&eigenvalues(&circ).unwrap(), &symbol_spectrum(&m, ring));
            assert!(dist <= 1e-9, "ring {ring}: {dist}");
        }
    }
}

#[test]
fn corrected_ring_abscissa_matches_closed_form() {
    let (a, b) = (catalog::corrected().a().clone(), catalog::corrected().b().clone());
    let p = corrected_p();
    let kind = InvolutionKind::CoeffConjugate;
    // the ring of 8 contains θ = π/2, where the closed loop is -1
    let r8 = truncated_closed_loop_abscissa(&a, &b, &p, kind, 8).unwrap();
    assert!((r8 + 1.0).abs() <= 1e-10, "{r8}");
    // the ring of 6 only reaches cos²θ = 1/4
    let r6 = truncated_closed_loop_abscissa(&a, &b, &p, kind, 6).unwrap();
    assert!((r6 + 2f64.sqrt()).abs() <= 1e-10, "{r6}");

    let closed = closed_loop_ring(&a, &b, &p, kind, 12).unwrap();
    let expect: Vec<Complex64> =
        (0..12).map(|j| Complex64::from(catalog::corrected_closed_loop(2.0 * PI * j as f64 / 12.0))).collect();
    assert!(match_distance(&eigenvalues(&closed).unwrap(), &expect) <= 1e-10);
}

#[test]
fn ring_abscissa_never_exceeds_grid_certificate() {
    for problem in [catalog::corrected(), catalog::second_involution()] {
        let sol = problem.solve(&SampleGrid::new(256).unwrap(), &FieldOptions::default()).unwrap();
        for ring in [3, 4, 6, 8, 16, 32] {
            let r =
                truncated_closed_loop_abscissa(problem.a(), problem.b(), &sol.p, problem.involution(), ring).unwrap();
            assert!(r <= sol.stability.abscissa + 1e-10, "ring {ring}: {r} vs {}", sol.stability.abscissa);
        }
    }
}

#[test]
fn simulation_matches_matrix_exponential_and_decays() {
    let problem = catalog::corrected();
    let p = corrected_p();
    let kind = InvolutionKind::CoeffConjugate;
    let ring = 16;
    let x0 = unit_impulse(ring, 1, 3);
    let traj = simulate_closed_loop(problem.a(), problem.b(), &p, kind, ring, &x0, 5.0, 0.01).unwrap();
    let closed: CMat = closed_loop_ring(problem.a(), problem.b(), &p, kind, ring).unwrap();
    let v0 = DVector::from_column_slice(&x0);
    for &(t, norm) in traj.iter().step_by(50) {
        let exact = (expm(&closed, t) * &v0).norm();
        assert!((norm - exact).abs() <= 1e-8, "t = {t}: {norm} vs {exact}");
    }
    let (t_end, n_end) = *traj.last().unwrap();
    assert!((t_end - 5.0).abs() < 1e-12);
    assert!(n_end <= (-4.5f64).exp() * traj[0].1, "{n_end}");
}

#[test]
fn gain_profile_decays_for_corrected_only() {
    let problem = catalog::corrected();
    let prof = gain_decay_profile(problem.b(), &corrected_p(), problem.involution(), &WeightSequence::Unit).unwrap();
    assert!(prof.tail_max(30) < 1e-8);
    assert!(prof.weighted_sum.is_finite());

    // forced counterexample: the weighted C1 sum keeps growing with the grid
    let c1 = WeightSequence::Polynomial { s: 1.0 };
    let cx = catalog::counterexample();
    let sums: Vec<f64> = [1024, 4096]
        .iter()
        .map(|&n| {
            let sol = cx.solve_forced(&SampleGrid::new(n).unwrap(), &FieldOptions::default()).unwrap();
            gain_decay_profile(cx.b(), &sol.p, cx.involution(), &c1).unwrap().weighted_sum
        })
        .collect();
    assert!(sums[1] > 1.8 * sums[0], "{sums:?}");
}
