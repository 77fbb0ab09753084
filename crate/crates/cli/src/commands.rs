use std::fs;
use std::path::Path;

use serde::Serialize;

use riccati_wiener::field::{
    decay_certificate, levels_from_samples, stability_certificate, AssumptionReport, DecayCertificate, FieldOptions,
    FieldProblem, FieldSolution, SampleGrid, StabilityCertificate, Verdict,
};
use riccati_wiener::report::to_canonical_json;
use riccati_wiener::{Execution, FieldError, WeightSequence};

use crate::problem_file::{json_error, ProblemFile};
use crate::{CliError, Outcome};

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<(ProblemFile, FieldProblem), CliError> {
    let text = read_file(path)?;
    let file = ProblemFile::parse(&path.display().to_string(), &text)?;
    let problem = file.problem()?;
    Ok((file, problem))
}

fn grid(n: usize) -> Result<SampleGrid, CliError> {
    SampleGrid::new(n).map_err(|e| CliError::parse(e.to_string()))
}

#[derive(Serialize)]
struct CheckReport<'a> {
    grid: usize,
    all_pass: bool,
    failed: Vec<&'a str>,
    #[serde(flatten)]
    report: &'a AssumptionReport,
}

pub fn check(path: &Path, grid_size: Option<usize>, exec: Execution) -> Result<Outcome, CliError> {
    let (file, problem) = load(path)?;
    let g = grid(grid_size.unwrap_or(file.grid.n_max))?;
    let report = problem.check_assumptions(&g, file.tolerances.tol, exec);
    let failed = report.failed();
    for name in &failed {
        let c = report.checks().into_iter().find(|(n, _)| n == name).unwrap().1;
        eprintln!("{name} fails: defect {:e} at theta = {}", c.worst_defect, c.worst_theta);
    }
    let out = CheckReport { grid: g.size(), all_pass: report.all_pass(), failed, report: &report };
    Ok(Outcome::new(to_canonical_json(&out), if report.all_pass() { 0 } else { 1 }))
}

#[derive(Serialize)]
struct ErrorReport<'a, T: Serialize> {
    error: &'a str,
    message: String,
    #[serde(flatten)]
    detail: T,
}

#[derive(Serialize)]
struct NoDetail {}

fn violation(report: &AssumptionReport) -> CliError {
    #[derive(Serialize)]
    struct Detail<'a> {
        failed: Vec<&'a str>,
        #[serde(flatten)]
        report: &'a AssumptionReport,
    }
    let message = format!("assumption violation: {} fail", report.failed().join(", "));
    let json = to_canonical_json(&ErrorReport {
        error: "assumption_violation",
        message: message.clone(),
        detail: Detail { failed: report.failed(), report },
    });
    CliError::new(1, message).with_json(json)
}

/// Maps solver errors onto exit codes: 1 assumption or refinement failure,
/// 3 pointwise failure, 2 for input problems.
pub fn field_error(err: FieldError) -> CliError {
    match err {
        FieldError::AssumptionViolation(report) => violation(&report),
        FieldError::PointwiseSolveFailure { theta, ref source } => {
            #[derive(Serialize)]
            struct Detail {
                theta: f64,
            }
            let message = format!("pointwise solve failed at theta = {theta}: {source}");
            let json = to_canonical_json(&ErrorReport {
                error: "pointwise_solve_failure",
                message: message.clone(),
                detail: Detail { theta },
            });
            CliError::new(3, message).with_json(json)
        }
        FieldError::TargetNotReached { .. } => {
            let message = err.to_string();
            let json = to_canonical_json(&ErrorReport {
                error: "target_not_reached",
                message: message.clone(),
                detail: NoDetail {},
            });
            CliError::new(1, message).with_json(json)
        }
        other => CliError::parse(other.to_string()),
    }
}

pub struct SolveArgs<'a> {
    pub path: &'a Path,
    pub out: Option<&'a Path>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub weight: Option<WeightSequence>,
    pub c1_probe: bool,
    pub force_pointwise: bool,
    pub execution: Execution,
}

pub fn options(file: &ProblemFile, args: &SolveArgs) -> Result<FieldOptions, CliError> {
    let tol = args.tol.unwrap_or(file.tolerances.tol);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::parse(format!("--tol must be positive, got {tol}")));
    }
    Ok(FieldOptions {
        tol,
        tol_stab: file.tolerances.tol_stab,
        weight: args.weight.unwrap_or(file.weight),
        c1_probe: args.c1_probe,
        execution: args.execution,
    })
}

/// Fixed grid if given, otherwise doubling refinement toward the continuity
/// target. Forced solves skip the hypothesis check.
pub fn run_solve(file: &ProblemFile, problem: &FieldProblem, args: &SolveArgs) -> Result<FieldSolution, CliError> {
    let opts = options(file, args)?;
    let result = if args.force_pointwise {
        eprintln!("warning: --force-pointwise skips the assumption check; the result is NON-CONFORMING");
        problem.solve_forced(&grid(args.grid.unwrap_or(file.grid.n_max))?, &opts)
    } else if let Some(n) = args.grid {
        problem.solve(&grid(n)?, &opts)
    } else {
        problem.refine_until_continuous(file.grid.n0, file.grid.n_max, file.tolerances.continuity_target, &opts)
    };
    result.map_err(field_error)
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    out: String,
    grid: usize,
    conforming: bool,
    residual_max: f64,
    continuity_modulus: f64,
    aliasing_estimate: f64,
    abscissa: f64,
    margin_pass: bool,
    verdict: &'a str,
}

pub fn solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let (file, problem) = load(args.path)?;
    let sol = run_solve(&file, &problem, args)?;
    eprintln!(
        "solved on N = {}: residual {:e}, continuity modulus {:e}, abscissa {}",
        sol.grid.size(),
        sol.residual_max,
        sol.continuity_modulus,
        sol.stability.abscissa
    );
    let full = to_canonical_json(&sol);
    match args.out {
        None => Ok(Outcome::new(full, 0)),
        Some(out) => {
            fs::write(out, full + "\n").map_err(|e| CliError::new(1, format!("{}: {e}", out.display())))?;
            let summary = SolveSummary {
                out: out.display().to_string(),
                grid: sol.grid.size(),
                conforming: sol.conforming,
                residual_max: sol.residual_max,
                continuity_modulus: sol.continuity_modulus,
                aliasing_estimate: sol.aliasing_estimate,
                abscissa: sol.stability.abscissa,
                margin_pass: sol.stability.margin_pass,
                verdict: sol.decay.verdict().as_str(),
            };
            Ok(Outcome::new(to_canonical_json(&summary), 0))
        }
    }
}

#[derive(Serialize)]
pub struct CertifyReport {
    pub conforming: bool,
    pub grid: usize,
    pub stability: StabilityCertificate,
    pub decay: DecayCertificate,
}

/// 4 when the decay trend diverges, 0 for a passing margin with certified
/// membership, 1 otherwise.
pub fn certify_exit_code(stability: &StabilityCertificate, decay: &DecayCertificate) -> i32 {
    match decay.verdict() {
        Verdict::Diverging => 4,
        Verdict::CertifiedMember if stability.margin_pass => 0,
        _ => 1,
    }
}

pub fn certify_solution(
    problem: &FieldProblem,
    sol: &FieldSolution,
    tol_stab: f64,
    weight: WeightSequence,
    c1_probe: bool,
    exec: Execution,
) -> Result<CertifyReport, CliError> {
    let n = problem.state_dim();
    if sol.pi_samples.len() != sol.grid.size() || sol.pi_samples.iter().any(|s| s.shape() != (n, n)) {
        return Err(CliError::parse(format!(
            "solution does not match the problem: expected {} samples of size {n}x{n}",
            sol.grid.size()
        )));
    }
    let stability = stability_certificate(problem.a(), problem.b(), &sol.grid, &sol.pi_samples, tol_stab, exec)
        .map_err(field_error)?;
    let decay = decay_certificate(&levels_from_samples(&sol.pi_samples), weight, c1_probe).map_err(field_error)?;
    Ok(CertifyReport { conforming: sol.conforming, grid: sol.grid.size(), stability, decay })
}

pub fn certify(args: &SolveArgs, solution: Option<&Path>) -> Result<Outcome, CliError> {
    let (file, problem) = load(args.path)?;
    let sol = match solution {
        Some(path) => {
            let text = read_file(path)?;
            serde_json::from_str::<FieldSolution>(&text).map_err(|e| json_error(&path.display().to_string(), &e))?
        }
        None if args.force_pointwise => run_solve(&file, &problem, args)?,
        None => return Err(CliError::parse("certify needs --solution <file> or --force-pointwise".into())),
    };
    if !sol.conforming {
        eprintln!("warning: certifying a NON-CONFORMING pointwise solution");
    }
    let opts = options(&file, args)?;
    let report = certify_solution(&problem, &sol, opts.tol_stab, opts.weight, args.c1_probe, args.execution)?;
    eprintln!(
        "abscissa {} (margin {}), decay verdict {}",
        report.stability.abscissa,
        if report.stability.margin_pass { "pass" } else { "fail" },
        report.decay.verdict().as_str()
    );
    let code = certify_exit_code(&report.stability, &report.decay);
    Ok(Outcome::new(to_canonical_json(&report), code))
}
