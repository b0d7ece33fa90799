use std::process::ExitCode;

fn main() -> ExitCode {
    awg_cli::run(std::env::args_os())
}
