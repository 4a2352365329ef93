//! Benchmark harness for the saeame library: experiment matrices over
//! problems, dimensions, algorithms, and repeats, with persisted run
//! records, significance-annotated summary tables, and plot-ready front
//! exports.

pub mod config;
pub mod demo;
pub mod error;
pub mod records;
pub mod runner;
pub mod summary;

pub use config::{Algorithm, DimSettings, ExperimentConfig};
pub use error::HarnessError;
pub use records::{fingerprint, format_sci, LogRow, RunRecord};
pub use runner::{run_cell, run_experiment, ExperimentOutcome};
pub use summary::{emit_front_csv, summarize_dir, summary_csv, SummaryRow};
