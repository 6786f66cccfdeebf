use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use scarmat_cli::{resolve, run, Cli, CliError};

/// Exit codes: 0 all checks met tolerance, 1 some check failed, 2 usage or I/O error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = cli.command.split();
    match execute(command, &flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("scarmat: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: scarmat_cli::Command, flags: &scarmat_cli::Flags) -> Result<bool, CliError> {
    let cfg = resolve(command, flags)?;
    let report = run(&cfg)?;
    let text = report.encode(cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Io("stdout".into(), e))?;
        }
    }
    Ok(report.all_passed())
}
