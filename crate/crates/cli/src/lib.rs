//! Command-line front end for `rectpack`: solving, validation, SVG rendering,
//! benchmarking and instance generation.

pub mod app;
pub mod bench;
pub mod error;
pub mod gen;
pub mod render;
pub mod solve;

pub use error::CliError;
