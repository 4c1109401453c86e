//! Run archives, analysis reports, FAIR metadata and the checklist audit.

pub mod archive;
mod audit;
pub mod checksum;
mod fair;
mod report;

pub use archive::{read_archive, write_archive, ArchiveAppender, ArchiveHeader, RunArchive, ARCHIVE_SCHEMA};
pub use audit::{audit_checklist, AuditStatus, ChecklistItem, ChecklistReport, CHECKLIST};
pub use checksum::{sha256_file, sha256_hex};
pub use fair::{DatasetReference, FairDescriptor, FAIR_SCHEMA};
pub use report::{
    format_sig, generate_report, render_text, summarize_group, EnvironmentSummary, GroupSummary, HypothesisReport, Report,
    REPORT_SCHEMA,
};
