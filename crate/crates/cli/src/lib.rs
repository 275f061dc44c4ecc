//! Front end for the `nuccr` binary: argument parsing, scenario sweeps and
//! the verification run.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 usage, 3 I/O.

pub mod config;
pub mod scenario;

use std::ffi::OsString;

use thiserror::Error;

pub use config::{parse_config, Scenario, ScenarioConfig};
pub use scenario::{run_scenario, run_verify, Output, Table};

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not an error for the caller.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical error: {0}")]
    Model(#[from] nuccr_core::Error),
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        let text = e.render().to_string();
        if e.use_stderr() {
            CliError::Usage(text)
        } else {
            CliError::Help(text)
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Invariant(_) | CliError::Model(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Parses, runs and reports. Returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_config(argv).and_then(|cfg| match cfg.scenario {
        Scenario::Verify => {
            let (json, passed) = run_verify(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&json).expect("report serializes"));
            Ok(if passed { 0 } else { 1 })
        }
        _ => {
            for out in run_scenario(&cfg)? {
                println!("{}", out.csv.display());
            }
            Ok(0)
        }
    });
    match result {
        Ok(code) => code,
        Err(CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            match &e {
                CliError::Usage(text) => eprint!("{}{}", text, if text.ends_with('\n') { "" } else { "\n" }),
                other => eprintln!("nuccr: {other}"),
            }
            e.exit_code()
        }
    }
}
