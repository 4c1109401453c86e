//! Harness for falsifiable, replicable empirical ML experiments.
//!
//! An experiment is treated as an opaque function from independent and
//! control variables to dependent variables. The crate covers the whole
//! loop around that function:
//!
//! * [`model`] declares typed variables, hypotheses and the factor grid, and
//!   expands the grid into deterministically seeded trials.
//! * [`orchestrator`] runs each trial through an external program (or any
//!   [`orchestrator::TrialExecutor`]) and appends records to a resumable archive.
//! * [`stats`] holds the statistical procedures: descriptives, confidence
//!   intervals, pre-tests and the comparison tests with exact small-sample
//!   null distributions.
//! * [`selector`] picks the comparison test from the distribution/variance
//!   classification of the two groups and renders verdicts.
//! * [`provenance`] reads and writes archives, renders reports, builds FAIR
//!   descriptors and audits a study against the methodology checklist.
//! * [`cli`] wires these together behind the `veritas` binary.

pub mod cli;
pub mod error;
pub mod model;
pub mod orchestrator;
pub mod provenance;
pub mod selector;
pub mod stats;

pub use error::{Error, Result};

/// Version string recorded in archives, reports and environment captures.
pub const HARNESS_VERSION: &str = concat!("veritas ", env!("CARGO_PKG_VERSION"));
