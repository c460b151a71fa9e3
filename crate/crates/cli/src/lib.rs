//! Command-line front end for `sigma-core`: presentation and character
//! formats, certificate files and report assembly.

pub mod certfile;
pub mod commands;
pub mod error;
pub mod grammar;

pub use commands::{dispatch, run, Cli, Outcome};
pub use error::{CliError, Result};
