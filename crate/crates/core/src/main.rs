use std::io::Write;
use std::process::ExitCode;

use bellcheck::cli::{main_with_args, SEED_ENV};

fn main() -> ExitCode {
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = main_with_args(std::env::args_os().skip(1), env_seed.as_deref());
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    ExitCode::from(u8::try_from(result.exit_code).unwrap_or(1))
}
