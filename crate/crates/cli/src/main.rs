use std::ffi::OsString;

use clap::Parser;

mod args;
mod commands;
mod config;
mod error;
mod output;

use args::Cli;
use error::CliError;

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}

fn run(argv: Vec<OsString>) -> i32 {
    match try_run(argv) {
        Ok(code) => code,
        Err(e) => {
            e.report();
            e.exit_code()
        }
    }
}

fn try_run(argv: Vec<OsString>) -> Result<i32, CliError> {
    let argv = config::resolve_argv(argv)?;
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    commands::dispatch(&cli)
}
