//! Command-line front end: configuration, presets, file formats, plotting and
//! the subcommands built on `qgrating-core`.

pub mod commands;
pub mod config;
pub mod formats;
pub mod plot;
pub mod presets;

pub use commands::CliError;
pub use config::RunConfig;
