use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(qms_cli::run(qms_cli::Cli::parse()))
}
