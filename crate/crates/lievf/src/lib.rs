//! Text and JSON front end for `lievf-core`: polynomial grammar, report
//! documents, parallel cycle scans and the `lievf` command line.

pub mod cli;
pub mod exprio;
pub mod parallel;
pub mod verify;

pub use exprio::{format_poly, parse_field, parse_poly, ParseError, ReportDocument};
