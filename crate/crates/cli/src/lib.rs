//! File formats and command implementations behind the `varray` binary.

pub mod commands;
pub mod error;
pub mod shard;
pub mod specfile;
pub mod stripe;

pub use error::CliError;
