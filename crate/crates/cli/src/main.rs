//! `edocc`: synthetic data, features, backtests, evaluation and model
//! comparison for hourly emergency-department occupancy.
//!
//! Exit codes: 0 success, 2 usage, 3 data or validation, 4 numeric failure.

mod args;
mod commands;
mod config;
mod report;

use std::fmt::Display;
use std::process::ExitCode;

use clap::Parser;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            msg: msg.into(),
        }
    }
}

impl From<edocc_core::Error> for Failure {
    fn from(e: edocc_core::Error) -> Self {
        let code = if e.is_numeric() {
            EXIT_NUMERIC
        } else {
            EXIT_DATA
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

/// Prefixes library errors with what was being done, keeping the exit code.
pub trait CoreContext<T> {
    fn context(self, what: impl Display) -> Result<T, Failure>;
}

impl<T> CoreContext<T> for edocc_core::Result<T> {
    fn context(self, what: impl Display) -> Result<T, Failure> {
        self.map_err(|e| {
            let mut f = Failure::from(e);
            f.msg = format!("{what}: {}", f.msg);
            f
        })
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
