//! Command-line front end.

pub mod args;
pub mod commands;
pub mod input;

use std::ffi::OsString;
use std::fs;

use clap::Parser;
use serde_json::Value;
use thiserror::Error;

pub use args::{Cli, Command, Format};

use crate::io::LoadError;
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(LoadError),
    #[error("{0}")]
    Library(pgraph_core::Error),
}

/// Exit code and rendered streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn config_of(cmd: &Command) -> Value {
    let v = match cmd {
        Command::Apply(a) => serde_json::to_value(a),
        Command::Energy(a) => serde_json::to_value(a),
        Command::Gsr(a) => serde_json::to_value(a),
        Command::Picone(a) => serde_json::to_value(a),
        Command::Capacity(a) => serde_json::to_value(a),
        Command::NullSeq(a) => serde_json::to_value(a),
        Command::Harnack(a) => serde_json::to_value(a),
        Command::Hardy(a) => serde_json::to_value(a),
        Command::Liouville(a) => serde_json::to_value(a),
        Command::IneqScan(a) => serde_json::to_value(a),
        Command::ModelCheck(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

/// Runs a parsed command and renders its report.
pub fn run(cli: &Cli) -> Outcome {
    let cmd = &cli.command;
    let common = cmd.common();
    let mut report = Report::new(cmd.name(), config_of(cmd));
    match commands::execute(cmd, &mut report) {
        Ok(()) => {}
        Err(CliError::Library(e)) => {
            report.result = Value::Null;
            report.table = None;
            report.fail("precondition", e.to_string(), None);
        }
        Err(e) => {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") };
        }
    }
    let code = if report.verification.passed { EXIT_OK } else { EXIT_VERIFICATION };
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => match report.to_csv() {
            Ok(t) => t,
            Err(e) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
    };
    let mut stderr = String::new();
    for f in &report.verification.failures {
        stderr.push_str(&format!("verification failed: {}: {}\n", f.check, f.detail));
    }
    match &common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                return Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("error: writing {}: {e}\n", path.display()),
                };
            }
            Outcome { code, stdout: String::new(), stderr }
        }
        None => Outcome { code, stdout: text, stderr },
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}
