use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod error;
mod output;

use commands::{Context, Output, Subcommand};
use error::CliError;

/// Evanescent modes behind a screen: spectra, near fields, probe absorption,
/// recoil of a finite-mass screen and Gamow lifetimes.
#[derive(Debug, Parser)]
#[command(name = "evanescent", version)]
struct Cli {
    #[command(subcommand)]
    command: Subcommand,

    /// Scenario file (TOML); built-in defaults when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run the consistency checks and report pass/fail counts instead
    #[arg(long, global = true)]
    check: bool,

    /// Quadrature tolerance for field and absorption integrals
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::config("--tolerance", "must be positive and finite"));
        }
    }
    let loaded = config::load(cli.config.as_deref())?;
    let ctx = Context {
        loaded: &loaded,
        tolerance: cli.tolerance,
        check: cli.check,
    };
    let run = commands::run(cli.command, &ctx)?;

    let mut buf = Vec::new();
    let all_passed = run.checks.failed() == 0;
    if cli.check {
        output::write_json(&run.checks.report(cli.command, run.inputs), &mut buf)?;
    } else {
        match &run.output {
            Output::Csv(t) => t.write_to(&mut buf)?,
            Output::Json(v) => output::write_json(v, &mut buf)?,
        }
    }
    match &cli.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            let mut line = serde_json::to_string(&e.record()).expect("error record");
            line.push('\n');
            let _ = std::io::stderr().lock().write_all(line.as_bytes());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
