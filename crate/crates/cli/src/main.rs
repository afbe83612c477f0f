//! `jetlift` — batch driver for the power-series lifting engine.
//!
//! `jetlift run problem.json` solves or refuses the problem and writes a
//! certificate report; `jetlift verify problem.json report.json`
//! re-checks every certificate in a report independently.
//!
//! Exit codes: 0 on success, 2 when the mathematics says no (a refusal
//! with a witness, a failed check, a report that does not verify), 1 for
//! everything that prevented an answer (IO, malformed input, resource
//! limits).

mod convert;
mod csv;
mod run;
mod schema;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::run::{run_problem, status_is_success};
use crate::schema::{Problem, Report};
use crate::verify::{verify_report, VerifyError};

#[derive(Parser)]
#[command(name = "jetlift", version, about = "Certified power-series lifting, batch style")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and emit a certificate report
    Run {
        /// Problem file (JSON)
        problem: PathBuf,
        /// Write the report here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Deterministic grid-jitter seed for numerical tasks (0 = none)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the problem's truncation order (series tasks only).
        /// The report records the effective order, so it verifies against
        /// the original file only when the two agree.
        #[arg(long)]
        order: Option<u32>,
        /// Also dump sampled functions from cutoff/borel tasks as CSV
        /// files into this directory
        #[arg(long, value_name = "DIR")]
        csv: Option<PathBuf>,
        /// Record the full iterate trace in lift reports
        #[arg(long)]
        trace: bool,
    },
    /// Re-check every certificate in a report against its problem
    Verify {
        /// Problem file (JSON)
        problem: PathBuf,
        /// Report produced by `run`
        report: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            problem,
            output,
            seed,
            trace,
        } => cmd_run(&problem, output.as_deref(), seed, trace),
        Command::Verify { problem, report } => cmd_verify(&problem, &report),
    }
}

fn load_problem(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {}", path.display(), e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| format!("parsing {}: {}", path.display(), e))?;
    Problem::from_json(value).map_err(|e| format!("{}: {}", path.display(), e))
}

fn cmd_run(problem_path: &Path, output: Option<&Path>, seed: u64, trace: bool) -> ExitCode {
    let problem = match load_problem(problem_path) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    let report = match run_problem(&problem, seed, trace) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    if let Some(path) = output {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {}", path.display(), e);
            return ExitCode::from(1);
        }
    } else {
        print!("{}", text);
    }
    match report.status.as_str() {
        "refused" => {
            let (code, message) = report
                .refusal
                .as_ref()
                .map(|r| (r.code.as_str(), r.message.as_str()))
                .unwrap_or(("", ""));
            eprintln!("refused [{}]: {}", code, message);
            ExitCode::from(2)
        }
        status if status_is_success(status) => {
            eprintln!("{}: {}", status, report.name);
            ExitCode::SUCCESS
        }
        status => {
            eprintln!("{}: {}", status, report.name);
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(problem_path: &Path, report_path: &Path) -> ExitCode {
    let problem = match load_problem(problem_path) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    let report: Report = match std::fs::read_to_string(report_path)
        .map_err(|e| format!("reading {}: {}", report_path.display(), e))
        .and_then(|text| {
            serde_json::from_str(&text)
                .map_err(|e| format!("parsing {}: {}", report_path.display(), e))
        }) {
        Ok(r) => r,
        Err(e) => {
            // A report that cannot even be read as a report does not
            // verify.
            println!("verification failed: {}", e);
            return ExitCode::from(2);
        }
    };
    match verify_report(&problem, &report) {
        Ok(checks) => {
            for line in &checks {
                println!("ok: {}", line);
            }
            println!(
                "verified: {} ({}), {} checks",
                report.name,
                report.task,
                checks.len()
            );
            ExitCode::SUCCESS
        }
        Err(VerifyError::Problem(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
        Err(VerifyError::Report(e)) => {
            println!("verification failed: {}", e);
            ExitCode::from(2)
        }
    }
}
