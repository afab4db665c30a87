use std::process::ExitCode;

use clap::Parser;
use mqdimer::cli::{run, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = std::io::stdout();
    match run(&args, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mqdimer: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
