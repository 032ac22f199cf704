use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let run = match foliage_cli::run(&argv) {
        Ok(r) => r,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => foliage_cli::EXIT_USAGE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(run.stdout().as_bytes());
    if let Some(e) = &run.error {
        eprintln!("foliage: {e}");
    }
    ExitCode::from(run.exit_code() as u8)
}
