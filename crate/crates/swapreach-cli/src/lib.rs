//! File formats and subcommands behind the `swapreach` binary.

pub mod commands;
pub mod files;
pub mod sources;
