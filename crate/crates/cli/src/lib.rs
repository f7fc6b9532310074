//! Command-line front end for `qvar-core`: JSON ingestion, bound
//! computation, golden-value suites, tensor dumps and entanglement tests.

pub mod commands;
pub mod error;
pub mod io;
pub mod verify;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
