//! Command-line front end: table, curve and scan CSVs plus the self-check.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::Settings;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters; exit code 2.
    Usage(String),
    /// Writing output failed; exit code 1.
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let settings = Settings::resolve(&cli.common)?;
    let report = match &cli.command {
        Command::Table1 { family, q, x } => commands::table1(family, *q, *x, &settings)?,
        Command::Table2 { family, criterion } => commands::table2(family, *criterion, &settings)?,
        Command::Table3 { family, q } => commands::table3(family, *q, &settings)?,
        Command::Curve {
            d,
            n,
            criterion,
            q_min,
            q_max,
            points,
            scale,
        } => commands::curve(*d, *n, criterion, *q_min, *q_max, *points, *scale, &settings)?,
        Command::Scan {
            d,
            n,
            criterion,
            q,
            x_min,
            x_max,
            points,
        } => commands::scan(*d, *n, criterion, *q, *x_min, *x_max, *points, &settings)?,
        Command::Verify { dense_limit } => return Ok(commands::verify_report(*dense_limit)),
    };
    output::emit(&report.table, cli.common.out.as_deref(), report.manifest)?;
    if report.failed {
        eprintln!("some cells failed; see the markers in the output");
    }
    Ok(!report.failed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Io(_) => ExitCode::from(1),
            }
        }
    }
}
