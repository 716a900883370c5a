//! Command-line front end for `ini-core`: sweep, verification, guard-band
//! and scenario reports as CSV or JSON, plus raw waveform dumps.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 a
//! guard-band search ran past its horizon.

pub mod cli;
pub mod commands;
pub mod dump;
pub mod error;
pub mod parallel;
pub mod report;
pub mod scenario_file;
pub mod units;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use cli::Cli;
pub use error::CliError;

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; messages go to stderr, reports to `--out` or stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
