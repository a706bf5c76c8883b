//! Batch driver for `tmodels-core`: motive manifests, reports, and the
//! canned reproduction scenarios.

pub mod commands;
pub mod error;
pub mod expr;
pub mod manifest;
pub mod report;
pub mod scenarios;

pub use commands::Options;
pub use error::CliError;
pub use report::{Format, Report, Status};
