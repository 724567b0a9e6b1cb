use std::process::ExitCode;

use clap::error::ErrorKind;
use dirmono_cli::{parse_config, run, CliError, EXIT_USAGE};

fn main() -> ExitCode {
    let code = match parse_config(std::env::args_os()).and_then(|config| run(&config)) {
        Ok(code) => code,
        Err(CliError::Usage(e))
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) =>
        {
            let _ = e.print();
            0
        }
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("dirmono: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
