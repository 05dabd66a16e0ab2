//! `ptlg`: figure data, optimization, identity checks and the signaling demo.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Report;
use crate::config::{Cli, Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Format;

fn execute(cli: &Cli) -> CliResult<()> {
    let mut cfg = RunConfig::from_cli(cli)?;
    let report = match &cli.command {
        Command::Figure { number } => commands::figure(&cfg, *number)?,
        Command::Optimize { expression, .. } => {
            // The optimization report is always a JSON document.
            cfg.format = Format::Json;
            commands::optimize(&cfg, *expression)?
        }
        Command::Check { .. } => commands::check(&cfg)?,
        Command::Nosignal => commands::nosignal(&cfg)?,
    };
    emit(&cfg, &report)?;
    report.failure.map_or(Ok(()), Err)
}

/// Write the whole output once, to `--out` or standard output.
fn emit(cfg: &RunConfig, report: &Report) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &report.text).map_err(|source| CliError::Io {
            context: "cannot write output",
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(report.text.as_bytes()).and_then(|()| stdout.flush()).map_err(|source| {
                CliError::Io { context: "cannot write output", path: "<stdout>".into(), source }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests exit 0; parse errors exit 2.
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptlg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
