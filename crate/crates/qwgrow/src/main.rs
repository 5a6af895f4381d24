use std::process::ExitCode;

fn main() -> ExitCode {
    qwgrow::cli::cli_main(std::env::args_os())
}
