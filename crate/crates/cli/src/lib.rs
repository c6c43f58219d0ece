//! Command-line front end for the `gmcp` binary: instance generation,
//! solving, exhaustive verification, LP export and benchmarking.

pub mod args;
pub mod bench;
pub mod commands;
mod error;

pub use error::{exit, CliError};
