//! `ccl`: config-driven front end for the radial curvature solver.

mod config;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use pipeline::{Failure, Overrides, Setup};

#[derive(Parser, Debug)]
#[command(
    name = "ccl",
    version,
    about = "Prescribed Chern scalar curvature on radial models"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path prefix for CSV, JSON and SVG artifacts.
    #[arg(long, global = true, default_value = "ccl_out")]
    out: PathBuf,
    /// Comma-separated exhaustion radii, overriding `grid.radii`.
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Number of grid cells, overriding `grid.N`.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Solver tolerance, overriding `tolerances.solve`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Skip the SVG plot.
    #[arg(long, global = true)]
    no_plot: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Classify, construct the lower solution, solve, verify and export.
    Run,
    /// Case report for the configured hypotheses.
    Classify,
    /// Classify, construct the lower solution, solve and export; no checks.
    Solve,
    /// Full pipeline; prints the summary instead of writing artifacts.
    Verify,
    /// Matched comparison bound against the model's drift, as CSV.
    CompareLaplacian,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.config {
        Some(path) => dispatch(&cli, path),
        None => Err(Failure::Schema(config::SchemaError {
            message: "--config is required".into(),
            line: None,
            column: None,
        })),
    };
    match outcome {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ExitCode::SUCCESS
        }
        Err(failure) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&failure.to_json()).expect("failure serializes")
            );
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli, path: &Path) -> Result<serde_json::Value, Failure> {
    let cfg = config::load(path)?;
    let ov = Overrides {
        radii: cli.radii.clone(),
        cells: cli.grid,
        tol: cli.tol,
        plot: !cli.no_plot,
    };
    let setup = pipeline::setup(cfg, &ov)?;
    match cli.command.unwrap_or(Command::Run) {
        Command::Classify => classify(&setup),
        Command::CompareLaplacian => {
            let out = verification_path(&cli.out, ".laplacian.csv");
            let (_, worst) = pipeline::compare_laplacian(&setup, Some(&out))?;
            if worst > 0.0 {
                Ok(json!({"status": "pass", "min_margin": worst, "csv": out}))
            } else {
                Err(Failure::Check {
                    stage: "compare-laplacian",
                    reason: format!("comparison bound below the drift: min margin {worst:e}"),
                })
            }
        }
        cmd => run(&setup, cmd, &cli.out, ov.plot),
    }
}

fn verification_path(prefix: &Path, suffix: &str) -> PathBuf {
    ccl_core::verification::with_suffix(prefix, suffix)
}

fn classify(setup: &Setup) -> Result<serde_json::Value, Failure> {
    let report = pipeline::classify_stage(setup)?;
    if report.matched_case == ccl_core::Case::None {
        return Err(Failure::Check {
            stage: "classify",
            reason: format!(
                "no case matched (margin {:e}, scaling condition {:?})",
                report.margin, report.shift_condition
            ),
        });
    }
    Ok(json!({"status": "pass", "case_report": report}))
}

fn run(setup: &Setup, cmd: Command, out: &Path, plot: bool) -> Result<serde_json::Value, Failure> {
    let lower = pipeline::lower_stage(setup)?;
    let solved = pipeline::solve_stage(setup, &lower)?;
    let verified = pipeline::verify_stage(setup, &lower, &solved)?;
    if cmd == Command::Verify {
        if !verified.failed.is_empty() {
            return Err(Failure::Check {
                stage: "verify",
                reason: verified.failed.join("; "),
            });
        }
        return Ok(json!({"status": "pass", "summary": verified.summary}));
    }
    let written = pipeline::export_stage(setup, &verified, out, plot)?;
    if cmd == Command::Run && !verified.failed.is_empty() {
        return Err(Failure::Check {
            stage: "verify",
            reason: format!(
                "{} (artifacts in {})",
                verified.failed.join("; "),
                written.json.display()
            ),
        });
    }
    Ok(json!({
        "status": "pass",
        "route": verified.summary.route,
        "iterations": verified.summary.iterations,
        "residual_sup": verified.summary.residual_sup,
        "files": written,
    }))
}
