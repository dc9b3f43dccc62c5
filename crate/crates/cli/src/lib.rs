//! Command-line front end: spec-file parsing, report documents and the
//! subcommand pipelines behind the `parabolic` binary.

pub mod cli;
pub mod commands;
pub mod report;
pub mod spec_file;
