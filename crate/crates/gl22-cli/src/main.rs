use std::process::ExitCode;

use clap::Parser;
use gl22_cli::{configure_threads, emit, execute, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<bool, CliError> {
        configure_threads()?;
        let cfg = RunConfig::from_cli(&cli)?;
        let out = execute(&cfg)?;
        emit(&cfg, &out)?;
        Ok(out.pass)
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gl22: {e}");
            ExitCode::from(2)
        }
    }
}
