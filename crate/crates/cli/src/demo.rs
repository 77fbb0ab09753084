//! Built-in end-to-end runs on the reference problems.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use riccati_wiener::catalog;
use riccati_wiener::field::{AssumptionCheck, DecayCertificate, FieldSolution, SampleGrid, Verdict};
use riccati_wiener::linalg::spectral_norm;
use riccati_wiener::report::to_canonical_json;
use riccati_wiener::spatial::{
    gain_decay_profile, simulate_closed_loop, truncated_closed_loop_abscissa, unit_impulse, write_simulation_csv,
};
use riccati_wiener::{Execution, FieldProblem, WeightSequence};

use crate::commands::{run_solve, SolveArgs};
use crate::problem_file::ProblemFile;
use crate::{CliError, Outcome};

pub const FILES: [(&str, &str); 3] = [
    ("counterexample.json", include_str!("../demos/counterexample.json")),
    ("corrected.json", include_str!("../demos/corrected.json")),
    ("second_involution.json", include_str!("../demos/second_involution.json")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum DemoName {
    Counterexample,
    Corrected,
    SecondInvolution,
    SpatialRing,
}

fn embedded(name: &str) -> (ProblemFile, FieldProblem) {
    let text = FILES.iter().find(|(n, _)| *n == name).expect("embedded demo").1;
    let file = ProblemFile::parse(name, text).expect("embedded demo parses");
    let problem = file.problem().expect("embedded demo is consistent");
    (file, problem)
}

fn solve_embedded(
    name: &str,
    c1_probe: bool,
    force_pointwise: bool,
    execution: Execution,
) -> Result<(ProblemFile, FieldProblem, FieldSolution), CliError> {
    let (file, problem) = embedded(name);
    let args = SolveArgs {
        path: Path::new(name),
        out: None,
        grid: None,
        tol: None,
        weight: None,
        c1_probe,
        force_pointwise,
        execution,
    };
    let sol = run_solve(&file, &problem, &args)?;
    Ok((file, problem, sol))
}

#[derive(Serialize)]
struct StabilitySummary {
    abscissa: f64,
    worst_theta: f64,
    margin_pass: bool,
}

#[derive(Serialize)]
struct ClosedFormReport<'a> {
    demo: &'a str,
    grid: usize,
    max_pointwise_error: f64,
    p0: f64,
    residual_max: f64,
    stability: StabilitySummary,
    decay: &'a DecayCertificate,
}

fn closed_form(demo: &str, file: &str, exact: fn(f64) -> f64, exec: Execution) -> Result<Outcome, CliError> {
    let (_, _, sol) = solve_embedded(file, false, false, exec)?;
    let max_err = sol
        .pi_samples
        .iter()
        .enumerate()
        .map(|(j, s)| (s[(0, 0)] - exact(sol.grid.theta(j))).norm())
        .fold(0.0, f64::max);
    let s = &sol.stability;
    let pass = max_err < 1e-9 && s.margin_pass && sol.decay.verdict() == Verdict::CertifiedMember;
    eprintln!("{demo}: grid N = {}", sol.grid.size());
    eprintln!("  max |Pi(theta) - closed form| = {max_err:.3e}");
    eprintln!(
        "  closed-loop abscissa = {:.16} at theta = {:.6} (margin {})",
        s.abscissa,
        s.worst_theta,
        if s.margin_pass { "pass" } else { "fail" }
    );
    eprintln!("  decay verdict: {}", sol.decay.verdict().as_str());
    let report = ClosedFormReport {
        demo,
        grid: sol.grid.size(),
        max_pointwise_error: max_err,
        p0: sol.p.get(0, 0).coeff(0).re,
        residual_max: sol.residual_max,
        stability: StabilitySummary { abscissa: s.abscissa, worst_theta: s.worst_theta, margin_pass: s.margin_pass },
        decay: &sol.decay,
    };
    Ok(Outcome::new(to_canonical_json(&report), if pass { 0 } else { 1 }))
}

#[derive(Serialize)]
struct CounterexampleReport<'a> {
    demo: &'a str,
    a1: AssumptionCheck,
    a1_defect_curve: Vec<(f64, f64)>,
    grid: usize,
    c1_partial_sums: &'a [(u64, f64)],
    c1_tail_ratio: Option<f64>,
    verdict: &'a str,
}

fn counterexample(exec: Execution) -> Result<Outcome, CliError> {
    let (file, problem) = embedded("counterexample.json");
    let check_grid = SampleGrid::new(file.grid.n_max).expect("validated");
    let report = problem.check_assumptions(&check_grid, file.tolerances.tol, exec);
    let a_star = problem.a().involute(problem.involution());
    let curve: Vec<(f64, f64)> = (0..16)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / 16.0;
            (theta, spectral_norm(&(a_star.eval(theta) - problem.a().eval(theta).adjoint())))
        })
        .collect();
    eprintln!("counterexample: A = z with the coefficient-conjugate involution");
    eprintln!(
        "  a1 {}: worst defect {} at theta = {:.6}",
        if report.a1.pass { "passes" } else { "fails" },
        report.a1.worst_defect,
        report.a1.worst_theta
    );
    eprintln!("  defect |A*(theta) - A(theta)^H| = 2|sin theta|:");
    for (theta, d) in &curve {
        eprintln!("    theta = {theta:.4}  defect = {d:.6}");
    }

    let (_, _, sol) = solve_embedded("counterexample.json", true, true, exec)?;
    let probe = sol.decay.c1_probe.as_ref().expect("probe requested");
    eprintln!("  forced pointwise solve on N = {}, C1 partial sums sum (1+|k|)|p_k|:", sol.grid.size());
    for (k, s) in &probe.partial_sums {
        eprintln!("    K = {k:5}  sum = {s:.6}");
    }
    eprintln!("  verdict: {}", sol.decay.verdict().as_str());
    let pass = !report.a1.pass && sol.decay.verdict() == Verdict::Diverging;
    let out = CounterexampleReport {
        demo: "counterexample",
        a1: report.a1,
        a1_defect_curve: curve,
        grid: sol.grid.size(),
        c1_partial_sums: &probe.partial_sums,
        c1_tail_ratio: probe.tail_ratio,
        verdict: sol.decay.verdict().as_str(),
    };
    Ok(Outcome::new(to_canonical_json(&out), if pass { 0 } else { 1 }))
}

#[derive(Serialize)]
struct SpatialReport<'a> {
    demo: &'a str,
    grid: usize,
    ring_abscissa: Vec<(usize, f64)>,
    gain_tail_max_30: f64,
    gain_weighted_sum: f64,
    simulation_ring: usize,
    simulation_final_norm: f64,
    decay_bound: f64,
}

const SIM_RING: usize = 16;
const SIM_T: f64 = 5.0;
const SIM_DT: f64 = 1e-3;

fn spatial_ring(out_dir: Option<&Path>, exec: Execution) -> Result<Outcome, CliError> {
    let (_, problem, sol) = solve_embedded("corrected.json", false, false, exec)?;
    let (a, b, kind) = (problem.a(), problem.b(), problem.involution());
    let spatial = |e: riccati_wiener::SpatialError| CliError::new(1, e.to_string());
    let rings = [8, 16, 32]
        .into_iter()
        .map(|n| truncated_closed_loop_abscissa(a, b, &sol.p, kind, n).map(|r| (n, r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(spatial)?;
    let profile = gain_decay_profile(b, &sol.p, kind, &WeightSequence::Unit).map_err(spatial)?;
    let traj = simulate_closed_loop(a, b, &sol.p, kind, SIM_RING, &unit_impulse(SIM_RING, 1, 0), SIM_T, SIM_DT)
        .map_err(spatial)?;
    let final_norm = traj.last().expect("non-empty trajectory").1;
    let bound = (-0.9 * SIM_T).exp();

    eprintln!("spatial_ring: corrected example on rings of N subsystems (P from grid N = {})", sol.grid.size());
    for (n, r) in &rings {
        eprintln!("  N = {n:2}: truncated closed-loop abscissa = {r:.16}");
    }
    eprintln!("  gain K = B*P: max |K_k| for |k| >= 30 = {:.3e}", profile.tail_max(30));
    eprintln!("  impulse on N = {SIM_RING}: |x(5)| = {final_norm:.6e} (bound e^-4.5 = {bound:.6e})");

    if let Some(dir) = out_dir {
        let io = |e: std::io::Error| CliError::new(1, format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        profile.write_csv(BufWriter::new(File::create(dir.join("gain_profile.csv")).map_err(io)?)).map_err(io)?;
        write_simulation_csv(&traj, BufWriter::new(File::create(dir.join("simulation.csv")).map_err(io)?))
            .map_err(io)?;
        eprintln!("  wrote gain_profile.csv and simulation.csv to {}", dir.display());
    }

    let pass = rings.iter().all(|(_, r)| (r + 1.0).abs() <= 1e-9) && final_norm <= bound;
    let out = SpatialReport {
        demo: "spatial_ring",
        grid: sol.grid.size(),
        ring_abscissa: rings,
        gain_tail_max_30: profile.tail_max(30),
        gain_weighted_sum: profile.weighted_sum,
        simulation_ring: SIM_RING,
        simulation_final_norm: final_norm,
        decay_bound: bound,
    };
    Ok(Outcome::new(to_canonical_json(&out), if pass { 0 } else { 1 }))
}

pub fn run(name: DemoName, out_dir: Option<&Path>, exec: Execution) -> Result<Outcome, CliError> {
    match name {
        DemoName::Counterexample => counterexample(exec),
        DemoName::Corrected => closed_form("corrected", "corrected.json", catalog::corrected_pi, exec),
        DemoName::SecondInvolution => {
            closed_form("second_involution", "second_involution.json", catalog::second_involution_pi, exec)
        }
        DemoName::SpatialRing => spatial_ring(out_dir, exec),
    }
}
