//! `rppg-confounds` command-line tool. Every subcommand writes its outputs
//! and a `run_config.json` echo into `--out`; standard output only carries
//! a short summary.

mod args;
mod cmd;
mod echo;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match cmd::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
