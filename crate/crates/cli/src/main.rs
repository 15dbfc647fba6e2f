//! `avclab`: command-line access to the exact adversarial-learning oracles.
//!
//! Every run prints one JSON document. Exit status is 0 on success, 1 when a
//! library precondition or input check fails, and 2 on usage errors.

mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;

pub enum CliError {
    Domain(avclab::Error),
    Usage(String),
}

impl From<avclab::Error> for CliError {
    fn from(e: avclab::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Domain(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n > 0 {
            // Only fails if a pool already exists, which cannot happen this early.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match commands::run(&cli.command) {
        Ok(doc) => {
            println!("{}", render::render(&doc, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(e)) => {
            let doc = json!({ "error": e.kind(), "message": e.to_string() });
            println!("{}", render::render(&doc, cli.pretty));
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            let doc = json!({ "error": "usage", "message": msg });
            println!("{}", render::render(&doc, cli.pretty));
            ExitCode::from(2)
        }
    }
}
