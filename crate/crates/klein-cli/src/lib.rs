//! File formats, reports and the command line for the `klein-core` kernel.

pub mod cli;
pub mod config;
pub mod export;
pub mod report;
