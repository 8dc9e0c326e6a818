//! Validation harness for `mdc-core`: configurable residual suites, JSON
//! reports, residual sweep CSV and surface kernel evaluation.

pub mod config;
pub mod io;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Suite, SuiteConfig};
pub use report::{CheckRecord, SuiteReport};
