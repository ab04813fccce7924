//! Configuration, experiment orchestration and report emission for the
//! `singular-plap` command line tool.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{parse_config, parse_config_str, ExperimentConfig, Kind};
pub use error::{CliError, Result};
pub use experiments::run_experiment;
pub use report::{emit_reports, Flag, ReportBundle};
