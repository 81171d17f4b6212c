//! Batch front end: JSON requests in, JSON or text reports out.

pub mod request;
pub mod run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("task {task} is not defined for kind {kind}")]
    Unsupported { task: String, kind: String },
    #[error("request task {request} does not match subcommand {command}")]
    TaskMismatch { request: String, command: String },
    #[error("missing input: {0}")]
    Missing(String),
    #[error("{0}")]
    Module(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub use request::{parse_request, Request, Task};
pub use run::{render_text, run, run_suite_task, Report, ReportOutcome, Settings};
