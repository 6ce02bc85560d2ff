//! JSON formats, reports and command dispatch for the `moore-tower` binary.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{execute, Cli, CommandName, CommandRequest, Outcome};
pub use report::{Format, Report};

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "MOORE_TOWER_THREADS";
