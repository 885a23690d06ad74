use std::process::ExitCode;

use clap::Parser;

use qspline_cli::{args::SEED_ENV, exit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, env_seed.as_deref(), &mut stdout) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == exit::USAGE {
                eprintln!("run `qspline --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
