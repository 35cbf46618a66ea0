//! `psdblock` command-line tool.
//!
//! Exit codes: 0 computed and the verdict holds, 1 computed and the verdict
//! is negative, 2 usage or input error, 3 numerical failure.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let outcome = RunConfig::try_from(cli).and_then(|config| {
        let report = commands::execute(&config)?;
        report.emit(&config)?;
        Ok(report.verdict_holds)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
