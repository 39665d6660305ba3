use std::process::ExitCode;

use clap::Parser;
use isoball_cli::args::Cli;
use isoball_cli::{execute, CliError, EXIT_USAGE};

fn run(cli: &Cli) -> Result<u8, CliError> {
    let exec = execute(cli)?;
    if let Some((path, table)) = &exec.csv {
        table.write(path)?;
    }
    let json = serde_json::to_string_pretty(&exec.report)?;
    match &cli.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(exec.report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
