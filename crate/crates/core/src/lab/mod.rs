//! Experiments behind a common trait, selected by name, with JSON and TSV
//! reports.
mod config;
pub mod criteria;
mod experiments;
mod report;

pub use config::{ExperimentConfig, Format};
pub use criteria::{criteria, Criterion, Outcome};
pub use experiments::{suite_report, Experiment, Registry};
pub use report::{Report, Section, SCHEMA};
