mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Cmd};
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Search(a) => commands::search(a),
        Cmd::Reproduce(a) => commands::reproduce(a),
        Cmd::FactorScan(a) => commands::factor_scan(a),
        Cmd::Addcase(a) => commands::addcase(a),
        Cmd::Heights(a) => commands::heights(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Mismatch(m) => f.write_str(m),
        }
    }
}
