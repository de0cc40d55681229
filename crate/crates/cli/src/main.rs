use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qcforge_cli::run(std::env::args_os()))
}
