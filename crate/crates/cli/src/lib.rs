//! Command-line front end: expression parsing, command dispatch, JSON
//! emission, and exit-code mapping.

pub mod ast;
pub mod commands;
pub mod lower;
pub mod parse;

use std::process::ExitCode;

use clap::Parser;

use commands::{execute, Cli};
use zariski_core::Limits;

/// Parses the command line, runs the command, prints its JSON document to
/// standard output, and maps the result to the exit code contract
/// (0 pass, 1 failure/divergence witness, 2 parse/semantic, 3 capacity).
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        max_order: cli.max_order,
        max_ideals: cli.max_ideals,
        ..Limits::default()
    };
    match execute(&cli.command, &limits) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.document).expect("JSON encoding")
            );
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(error) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&error.document()).expect("JSON encoding")
            );
            ExitCode::from(error.exit_code())
        }
    }
}
