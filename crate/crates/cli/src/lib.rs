//! Command implementations and config handling for the `equifem` binary.
//! Split out as a library so integration tests can drive the config layer
//! directly; the binary in `main.rs` only parses arguments and dispatches.

pub mod commands;
pub mod config;
pub mod report;
