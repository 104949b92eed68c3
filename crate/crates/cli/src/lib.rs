//! Library half of the `lienard` command: input parsing, output
//! formatting, sampling and plotting.

pub mod artifact;
pub mod commands;
pub mod error;
pub mod input;
pub mod json;
pub mod plot;
pub mod sample;

pub use error::{CliError, CliResult};
