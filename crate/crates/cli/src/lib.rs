//! Command-line front end for `fluxsim`: configuration, cached parallel
//! sweeps and CSV/PNG export.

pub mod cache;
pub mod config;
#[cfg(feature = "heatmap")]
pub mod heatmap;
pub mod manifest;
pub mod run;

pub use config::{load_config, parse_config, ConfigError, RunConfig};
pub use run::{run, RunError, RunOptions, RunOutcome, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Process exit code for a finished run.
pub fn exit_code(result: &Result<RunOutcome, RunError>) -> i32 {
    match result {
        Ok(o) if o.partial() => EXIT_PARTIAL,
        Ok(_) => EXIT_OK,
        Err(RunError::Config(_)) => EXIT_CONFIG,
        Err(_) => EXIT_FAILURE,
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
