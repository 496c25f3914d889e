//! Command-line harness: one scenario per invocation, seeded, with table,
//! JSON or CSV output.
//!
//! Exit status is 0 on success, 2 on invalid input and 3 when `--check`
//! finds a failed threshold.

mod args;
mod error;
mod scenarios;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use epilab::report::{Format, RunReport};

use args::Args;
use error::CliError;

const VALIDATION_FAILURE: u8 = 2;
const CHECK_FAILURE: u8 = 3;

fn run(args: &Args) -> Result<ExitCode, CliError> {
    if args.scenario == "list" {
        for s in scenarios::registry() {
            println!("{:<12} {}", s.name(), s.summary());
        }
        return Ok(ExitCode::SUCCESS);
    }
    let scenario = scenarios::find(&args.scenario).ok_or_else(|| CliError::UnknownScenario(args.scenario.clone()))?;
    if let Some(flag) = args.scenario_flags().into_iter().find(|f| !scenario.flags().contains(f)) {
        return Err(CliError::BadFlag { scenario: args.scenario.clone(), flag: flag.to_string() });
    }

    let start = Instant::now();
    let mut report = RunReport::new(scenario.name(), args.seed);
    let checks = scenario.run(args, &mut report)?;
    report.elapsed_ms = start.elapsed().as_millis() as u64;

    let format = if args.json {
        Format::Json
    } else if args.csv {
        Format::Csv
    } else {
        Format::Table
    };
    let text = report.emit(format);
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }

    if args.check {
        let mut failed = false;
        for c in &checks {
            eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            failed |= !c.passed;
        }
        if failed {
            return Ok(ExitCode::from(CHECK_FAILURE));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(VALIDATION_FAILURE)
        }
    }
}
