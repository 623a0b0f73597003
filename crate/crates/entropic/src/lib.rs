//! File formats, reports, parallel Monte Carlo drivers and the command-line
//! front end for `entropic-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;
pub mod report;

pub use error::CliError;
