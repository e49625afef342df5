use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;

use ptw_cli::{exit, exit_code, render, run, RunError};

fn main() -> ExitCode {
    let (config, opts) = match ptw_cli::cli::parse_from(std::env::args_os()) {
        Ok(parsed) => parsed,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE as u8),
            };
        }
    };
    let start = Instant::now();
    let report = match run(&config, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ptw: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    eprintln!(
        "ptw: {} finished in {:.2}s",
        config.subcommand.name(),
        start.elapsed().as_secs_f64()
    );
    let text = render(&report);
    let written = match &config.output_path {
        Some(path) => std::fs::write(path, text).map_err(RunError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("ptw: {e}");
        return ExitCode::from(exit::USAGE as u8);
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("ptw: check {} failed (observed {})", c.name, c.observed);
    }
    ExitCode::from(exit_code(&report, &opts) as u8)
}
