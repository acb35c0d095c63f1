use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gft_cli::{execute, Cli};

fn main() -> ExitCode {
    let run = execute(&Cli::parse());
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(run.output.as_bytes());
    let _ = out.flush();
    ExitCode::from(run.code)
}
