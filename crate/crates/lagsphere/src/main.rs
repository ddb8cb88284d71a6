use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let r = lagsphere::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(r.stdout.as_bytes());
    let _ = std::io::stderr().write_all(r.stderr.as_bytes());
    ExitCode::from(r.code as u8)
}
