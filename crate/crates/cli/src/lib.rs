//! The `hpowers` command line: configuration, subcommands, deterministic
//! reports, and the invariant suites behind `verify`.

pub mod commands;
pub mod config;
pub mod error;
pub mod measure;
pub mod report;
pub mod verify;

pub use config::Config;
pub use error::CliError;
