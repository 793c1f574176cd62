//! Suite configuration, case execution and report assembly for the `bott` binary.

pub mod config;
pub mod properties;
pub mod runner;

pub use config::{CaseSpec, SuiteConfig};
pub use runner::{exit_code, run_case, run_suite, SuiteReport};
