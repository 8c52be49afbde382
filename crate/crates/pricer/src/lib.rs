//! File formats, reports and the command-line front end for `csa-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;
pub mod report;

pub use error::{PricerError, Result};
