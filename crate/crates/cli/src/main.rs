use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mce_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("mce: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.csv).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.csv.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("mce: i/o error: {e}");
        return ExitCode::from(3);
    }
    if outcome.violation {
        eprintln!("mce: invariant violation reported in the output");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
