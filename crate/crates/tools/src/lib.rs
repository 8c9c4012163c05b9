//! File formats, the census report and the `toric` command line.

pub mod commands;
pub mod formats;
pub mod report;
