use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use harmonica::cli::{execute, Cli, ErrorRecord};
use harmonica::Error;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rec = serde_json::json!({ "code": "usage", "message": e.to_string() });
            eprintln!("{rec}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into)) {
        Ok(()) | Err(Error::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            let rec = serde_json::to_string(&ErrorRecord::from(&e)).expect("plain record");
            eprintln!("{rec}");
            ExitCode::FAILURE
        }
    }
}
