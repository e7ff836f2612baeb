//! Command-line front end: configuration, task orchestration, reports and
//! the bundled acceptance suite.

pub mod config;
pub mod report;
pub mod run;
pub mod status;
pub mod verify;
