//! File formats and the command-line front end for `mqdimer-core`.

pub mod cli;
pub mod config;
pub mod csv;
pub mod error;
pub mod histogram;
pub mod qasm;

pub use error::AppError;
