use std::process::ExitCode;

use clap::Parser;
use superconic::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("superconic: {e}");
            ExitCode::from(e.code)
        }
    }
}
