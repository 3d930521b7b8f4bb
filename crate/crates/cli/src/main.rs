use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = memsfront_cli::configure_threads() {
        eprintln!("memsfront: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(memsfront_cli::execute(std::env::args_os()) as u8)
}
