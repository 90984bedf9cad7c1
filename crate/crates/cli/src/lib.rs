//! Configuration loading and subcommand implementations for `stofuzz`.

pub mod commands;
pub mod config;

pub use config::{load_config, parse_config, ConfigError, ExperimentConfig};
