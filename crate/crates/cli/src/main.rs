//! `drh`: build DR-hierarchy Hamiltonians and flows, run the verification
//! suite, and cross-check against the KdV Lenard chain.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error,
//! 2 usage or input error, 3 missing oracle data.

mod args;
mod render;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match run::run(&cli) {
        Ok(out) => {
            if let Err(e) = render::emit(&cli.common.out, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
