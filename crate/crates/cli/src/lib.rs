//! File formats, run manifests and subcommands behind the `slinkage`
//! binary.
//!
//! [`run`] is the whole program: it parses arguments, executes one
//! subcommand and maps the outcome to an exit status (0 success, 1 internal
//! failure, 2 bad arguments or input).

pub mod args;
pub mod commands;
pub mod datagen;
pub mod error;
pub mod formats;
pub mod manifest;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};
pub use manifest::{RunManifest, RunParams, MANIFEST_FILE};

use args::Command;

/// Executes a parsed command. Returns the manifest when the command wrote
/// one.
pub fn execute(cli: &Cli) -> Result<Option<RunManifest>, CliError> {
    match &cli.command {
        Command::Cluster(a) => commands::cluster(a).map(Some),
        Command::Knn(a) => commands::knn(a).map(Some),
        Command::Mst(a) => commands::mst(a).map(Some),
        Command::Verify(a) => commands::verify(a).map(|_| None),
        Command::Bench(a) => commands::bench(a),
    }
}

/// Parses `args` (program name first) and runs the command, printing
/// errors to stderr. Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
