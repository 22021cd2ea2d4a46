//! `toricfam`: command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails (the
//! failing witness is printed), 2 on parse or validation errors.

mod config;
mod render;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_cli(cli).and_then(|config| {
        let outcome = run::run(&config)?;
        Ok((outcome, config.format))
    });
    match outcome {
        Ok((outcome, format)) => {
            print!("{}", render::render(&outcome, format));
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
