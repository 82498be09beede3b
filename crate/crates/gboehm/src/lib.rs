//! Command-line front end for `gboehm-core`: configuration, file formats and
//! the verbs behind the `gboehm` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod io;

pub use cli::Cli;
pub use commands::{run, Outcome};
pub use config::{Format, RunConfig};
