//! Command-line front end for `holosemi`.
//!
//! Every analysis is a subcommand. Reports are plain text by default and a
//! single JSON object with `--json`; exit codes are
//!
//! * 0: completed with an affirmative or neutral verdict,
//! * 1: completed with a negative verdict,
//! * 2: usage or parse error,
//! * 3: numerical failure.

use std::io::Write;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod report;
pub mod svg;

pub use args::{parse_complex, Cli, Command};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// An analysis precondition failed, which is itself a negative verdict.
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Numeric(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Negative(_) => EXIT_NEGATIVE,
            CliError::Numeric(_) | CliError::Io { .. } => EXIT_NUMERIC,
        }
    }
}

impl From<holosemi::Error> for CliError {
    fn from(e: holosemi::Error) -> Self {
        use holosemi::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse(_) | E::InvalidInput(_) => CliError::Usage(msg),
            E::NoDwFound(_)
            | E::NotApplicable(_)
            | E::HypothesisViolation(_)
            | E::InteriorZero { .. }
            | E::ParabolicInterior { .. } => CliError::Negative(msg),
            _ => CliError::Numeric(msg),
        }
    }
}

/// A finished analysis: the report and the exit code its verdict maps to,
/// plus an optional CSV/SVG payload.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
    pub payload: Option<String>,
}

/// Runs one command line, writing the report to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match args::expand_config(argv) {
        Ok(a) => a,
        Err(e) => return fail(err, &e),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match commands::execute(&cli) {
        Ok(o) => o,
        Err(e) => return fail(err, &e),
    };
    if let Err(e) = emit(&cli, &outcome, out) {
        return fail(err, &e);
    }
    outcome.exit
}

/// [`run_with`] on the process streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn fail(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "holosemi: error: {e}");
    e.exit_code()
}

fn emit(cli: &Cli, outcome: &Outcome, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |source| CliError::Io { path: "stdout".into(), source };
    if let (Some(path), Some(payload)) = (&cli.out, &outcome.payload) {
        std::fs::write(path, payload).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    if cli.json {
        out.write_all(outcome.report.to_json().as_bytes()).map_err(stdout_err)?;
    } else if let (None, Some(payload)) = (&cli.out, &outcome.payload) {
        out.write_all(payload.as_bytes()).map_err(stdout_err)?;
    } else {
        out.write_all(outcome.report.to_text().as_bytes()).map_err(stdout_err)?;
    }
    Ok(())
}
