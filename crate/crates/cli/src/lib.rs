//! Library side of the `algebra-ends` binary: configuration parsing,
//! built-in presets and subcommand execution.

pub mod commands;
pub mod config;
pub mod presets;

pub use commands::{run, Command, Report, RunError, RunOptions};
pub use config::{parse_config, ConfigError, Format, RunConfig};
pub use presets::Preset;
