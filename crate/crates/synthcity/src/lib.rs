//! File formats, parallel export and the command line for the synthcity
//! generator. The algorithms live in `synthcity-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod evaldir;
pub mod export;
pub mod imageio;
pub mod manifest_io;
pub mod pool;

pub use error::CliError;
pub use synthcity_core as core;
