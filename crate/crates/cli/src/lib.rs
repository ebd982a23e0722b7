//! Batch front end: configuration parsing, experiment dispatch and
//! byte-stable CSV/JSON reports.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, parse_config_in, ConfigErrors, ExperimentConfig, Format};
pub use report::{emit, render_csv, render_json, ReportEnvelope};
pub use run::{run, EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};
