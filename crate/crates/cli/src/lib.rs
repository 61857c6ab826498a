//! Command-line interface, static export bundle and read-only HTTP API for an
//! authenticator catalog.

pub mod api;
pub mod bundle;
pub mod commands;

pub use commands::{run, Cli};
