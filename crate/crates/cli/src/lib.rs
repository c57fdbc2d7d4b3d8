//! Runner behind the `twoquanta` binary. Every command renders its output
//! to a string so runs can be compared byte for byte.

pub mod commands;
pub mod config;

pub use commands::{
    audit_report, field_csv, paper_suite, probability_report, scan_csv, PAPER_SUITE,
};
pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid configuration:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Transition(#[from] twoquanta::TransitionError),
    #[error(transparent)]
    Scan(#[from] twoquanta::ScanError),
}
