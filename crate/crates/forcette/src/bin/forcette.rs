use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(forcette::cli::run(std::env::args()) as u8)
}
