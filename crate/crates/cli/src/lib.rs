//! Command-line front end for `qlpair-core`: pair files, experiment
//! commands and their text, JSON and CSV reports.

pub mod commands;
pub mod error;
pub mod expr;
pub mod format;
pub mod spec;

pub use commands::run;
pub use error::{exit, CliError};
