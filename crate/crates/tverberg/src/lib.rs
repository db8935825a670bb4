//! Command-line layer over `tverberg-core`: input documents, certified
//! reports and SVG plots.

pub mod commands;
pub mod input;
pub mod report;
pub mod svg;

pub use report::{Payload, Report, Status};
