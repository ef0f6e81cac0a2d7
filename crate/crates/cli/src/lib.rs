//! Scenario runner for the `boundfloq` library: flat TOML configs in,
//! byte-reproducible CSV tables, JSON summaries and plot scripts out.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod scenarios;

pub use error::{CliError, Result};
