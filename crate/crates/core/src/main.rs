use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use polya_spectra::cli::{error_json, run, usage_error_json, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", usage_error_json(&e));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(o) if o.success => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(2)
        }
    }
}
