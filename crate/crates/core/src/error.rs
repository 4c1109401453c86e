use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error("unsupported sample size {n}: {reason}")]
    UnsupportedSize { n: usize, reason: String },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("paired alignment failed for hypothesis {hypothesis}: missing pair keys {missing:?}")]
    Alignment { hypothesis: String, missing: Vec<String> },

    #[error("design has {} violation(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidDesign(Vec<Violation>),

    #[error("design expands to {count} trials, above the cap of {cap}")]
    TrialCap { count: u128, cap: u64 },

    #[error("archive corrupt at line {line}: {reason}")]
    ArchiveCorrupt { line: usize, reason: String },

    #[error("archive {path} belongs to a different design (fingerprint {found}, expected {expected})")]
    ArchiveMismatch { path: PathBuf, found: String, expected: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }
}
