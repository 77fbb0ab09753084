//! `rb`: check, solve and certify Riccati problems over Wiener algebras.
//!
//! Reports go to stdout as JSON; diagnostics go to stderr. `RB_THREADS`
//! caps the worker pool.

mod commands;
mod demo;
mod problem_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use riccati_wiener::par::configure_threads;
use riccati_wiener::{Execution, WeightSequence};

use commands::SolveArgs;
use demo::DemoName;

#[derive(Parser)]
#[command(name = "rb", version, about = "Riccati equations over Wiener algebras of the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the five hypotheses on the sample grid (n_max unless --grid).
    Check {
        file: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Solve pointwise and recover the coefficients of P.
    Solve {
        file: PathBuf,
        /// Write the full solution here; stdout then gets a summary.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fixed grid size instead of doubling refinement.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// unit | poly:<s> | subexp:<a>,<b>
        #[arg(long)]
        weight: Option<WeightSequence>,
        #[arg(long)]
        c1_probe: bool,
        /// Skip the hypothesis check (output is labeled non-conforming).
        #[arg(long)]
        force_pointwise: bool,
    },
    /// Stability and decay certificates for a solution.
    Certify {
        file: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// unit | poly:<s> | subexp:<a>,<b>
        #[arg(long)]
        weight: Option<WeightSequence>,
        #[arg(long)]
        c1_probe: bool,
        /// Without --solution: solve pointwise on the file's n_max grid, skipping the hypothesis check.
        #[arg(long)]
        force_pointwise: bool,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run a built-in example end to end.
    Demo {
        name: DemoName,
        /// spatial_ring only: write gain_profile.csv and simulation.csv here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// A finished command: JSON for stdout and the exit code.
pub struct Outcome {
    json: String,
    code: i32,
}

impl Outcome {
    pub fn new(json: String, code: i32) -> Self {
        Self { json, code }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub json: Option<String>,
}

impl CliError {
    pub fn new(code: i32, message: String) -> Self {
        Self { code, message, json: None }
    }

    /// Unreadable, malformed or inconsistent input.
    pub fn parse(message: String) -> Self {
        Self::new(2, message)
    }

    pub fn with_json(mut self, json: String) -> Self {
        self.json = Some(json);
        self
    }
}

fn apply_thread_cap() {
    let Ok(raw) = std::env::var("RB_THREADS") else { return };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = configure_threads(n) {
                eprintln!("warning: RB_THREADS ignored: {e}");
            }
        }
        _ => eprintln!("warning: RB_THREADS={raw:?} is not a positive integer, ignored"),
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let exec = Execution::Parallel;
    match cli.command {
        Command::Check { file, grid } => commands::check(&file, grid, exec),
        Command::Solve { file, out, grid, tol, weight, c1_probe, force_pointwise } => commands::solve(&SolveArgs {
            path: &file,
            out: out.as_deref(),
            grid,
            tol,
            weight,
            c1_probe,
            force_pointwise,
            execution: exec,
        }),
        Command::Certify { file, solution, weight, c1_probe, force_pointwise, grid } => commands::certify(
            &SolveArgs { path: &file, out: None, grid, tol: None, weight, c1_probe, force_pointwise, execution: exec },
            solution.as_deref(),
        ),
        Command::Demo { name, out_dir } => demo::run(name, out_dir.as_deref(), exec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    apply_thread_cap();
    let (json, code) = match run(cli) {
        Ok(out) => (Some(out.json), out.code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            (err.json, err.code)
        }
    };
    if let Some(json) = json {
        println!("{json}");
    }
    ExitCode::from(code as u8)
}
