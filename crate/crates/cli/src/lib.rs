//! File formats and plots behind the `ots` command.

pub mod commands;
pub mod error;
pub mod io;
pub mod plot;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

pub use error::{CliError, Result};
pub use io::{export_feature_matrix, load_manifest, load_series, DatasetManifest, SeriesFormat};
pub use plot::{Plot, PlotArtifact};

/// Parses `args` and runs the command, mapping failures to exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
