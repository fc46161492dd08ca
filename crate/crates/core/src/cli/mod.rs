//! Command-line front end: argument parsing, dispatch, output files and exit codes.

mod args;
mod commands;
mod io;

use std::ffi::OsString;

use clap::Parser;
use serde_json::{json, Value};

pub use args::Cli;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DIMENSION_CAP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input text.
    Parse(String),
    /// A required combination of flags is missing.
    Usage(String),
    /// Well-formed input that fails a check.
    Validation(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Lib(Error::Parse(_)) => EXIT_PARSE,
            CliError::Lib(Error::DimensionCap { .. }) => EXIT_DIMENSION_CAP,
            CliError::Validation(_) | CliError::Io(_) | CliError::Lib(_) => EXIT_VALIDATION,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::Lib(e) => e.kind(),
        }
    }

    pub fn to_json(&self) -> Value {
        let message = match self {
            CliError::Parse(m) | CliError::Usage(m) | CliError::Validation(m) | CliError::Io(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        };
        json!({ "error": self.kind(), "message": message })
    }
}

/// What a command produced; written to stdout or the requested files.
#[derive(Default)]
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

/// Runs a parsed invocation and writes its outputs.
pub fn dispatch(cli: &Cli) -> Result<Option<String>, CliError> {
    let out = commands::execute(cli)?;
    let invocation = serde_json::to_value(cli).expect("serializable invocation");
    let text = io::to_pretty(&io::with_invocation(out.json, &invocation));
    let csv = match &cli.csv {
        Some(path) => Some((path, out.csv.ok_or_else(|| CliError::Usage("this command has no tabular output for --csv".into()))?)),
        None => None,
    };
    let svg = match &cli.svg {
        Some(path) => Some((path, out.svg.ok_or_else(|| CliError::Usage("this command has no SVG output".into()))?)),
        None => None,
    };
    for (path, contents) in csv.iter().chain(svg.iter()) {
        io::write_atomic(path, contents)?;
    }
    match &cli.out {
        Some(path) => {
            io::write_atomic(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
/// Diagnostics go to stderr; results go to stdout unless redirected to a file.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(Some(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Ok(None) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
