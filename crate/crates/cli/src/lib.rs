//! Library half of the `coxforge` command-line tool, shared with its tests.

pub mod commands;
pub mod config;
pub mod error;
pub mod verify;

pub use commands::CommandOutput;
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use verify::{run_verify, RunReport, Status};
