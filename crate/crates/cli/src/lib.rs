//! Command-line driver for the `owc` experiments.
//!
//! Every command takes its settings from flags and, optionally, from a
//! `key=value` file given with `--config`; flags override the file. Results
//! are rendered in full before anything is written, so a failing run never
//! leaves a partial output file.

mod commands;
mod config;
pub mod golden;
mod output;

pub use commands::{run_command, Output};
pub use config::{parse_args, Command, Format, RunConfig, Scale};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Invalid flags, config file or parameters.
    Config(String),
    /// A golden table did not match.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<owc_core::Error> for CliError {
    fn from(e: owc_core::Error) -> CliError {
        CliError::Config(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(Some(c)) => c,
        Ok(None) => return EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match run_command(&config).and_then(|out| out.emit(&config)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
