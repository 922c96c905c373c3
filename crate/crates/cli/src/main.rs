mod args;
mod commands;
mod error;
mod input;
mod locate;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::EXIT_INVALID;

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    if let Some(theta) = cli.global.theta {
        if !(theta > 0.0 && theta <= 1.0) {
            eprintln!("error: --theta must lie in (0, 1], got {theta}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    match commands::run(&cli.global, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
