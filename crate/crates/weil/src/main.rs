use std::process::ExitCode;

fn main() -> ExitCode {
    weil::cli::run(std::env::args_os())
}
