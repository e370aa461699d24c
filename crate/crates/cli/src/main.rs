//! `fpwb` — the finitely-presented-group workbench CLI.
//!
//! Every command emits one JSON report (stdout or `--output`):
//!
//! ```json
//! {
//!   "schema": 1,
//!   "tool": "fpwb",
//!   "version": "…",
//!   "command": "…",
//!   "config": { … },
//!   "timestamp": 1234567890,
//!   "result": { … }
//! }
//! ```
//!
//! `--no-timestamp` drops the one nondeterministic field, making reports
//! byte-stable for identical config and inputs.
//!
//! Exit codes: 0 = all checks pass or are carried as explicit assertions;
//! 1 = a verifiable check failed; 2 = a budget stopped a required
//! computation; 3 = usage or parse error.

mod cli;
mod ops;

use clap::error::ErrorKind;
use clap::Parser;
use cli::Cli;
use ops::{CliError, Outcome};
use serde::Serialize;
use serde_json::Value;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Serialize)]
struct Envelope {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    result: Value,
}

fn emit(cli: &Cli, outcome: Outcome) -> Result<(), CliError> {
    let timestamp = if cli.no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    let envelope = Envelope {
        schema: 1,
        tool: "fpwb",
        version: env!("CARGO_PKG_VERSION"),
        command: outcome.command,
        config: outcome.config,
        timestamp,
        result: outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("reports serialize");
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are not errors; everything else is usage.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match ops::run(&cli.command) {
        Ok(outcome) => {
            let exit = outcome.exit;
            if let Err(err) = emit(&cli, outcome) {
                eprintln!("error: {err}");
                std::process::exit(3);
            }
            std::process::exit(exit as i32);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(3);
        }
    }
}
