//! Command-line front end for the `fvs-kernel` library.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError, Command, Family};
pub use format::{emit, parse, Instance, ParseError};
