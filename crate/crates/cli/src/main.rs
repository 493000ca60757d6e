use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod gnuplot;

use config::{Cli, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] susyd::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Domain(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on malformed arguments
    let cfg = RunConfig::from_cli(Cli::parse());
    match commands::run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("susyd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
