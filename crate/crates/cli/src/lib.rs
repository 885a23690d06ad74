//! `qspline` command-line driver: `fit`, `bench` and `decompose`.

pub mod args;
pub mod commands;
pub mod error;
pub mod svg;

use std::io::Write;

pub use args::{Cli, Command, Settings};
pub use error::{exit, CliError};

/// Runs a parsed command, printing to `out`; returns the process exit code.
pub fn run(cli: &Cli, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Fit(a) => commands::fit_cmd(a, env_seed, out),
        Command::Bench(a) => commands::bench_cmd(a, env_seed, out),
        Command::Decompose(a) => commands::decompose_cmd(a, out),
    }
}
