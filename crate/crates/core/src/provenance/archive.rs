//! Run archive, schema `veritas_archive_v1`.
//!
//! A JSON-lines file. Line 1 is the header
//! `{"schema":"veritas_archive_v1","harness_version":..,"design_fingerprint":..}`;
//! every following line is one [`RunRecord`] with fields in the order
//! `trial, status, outcomes_Y, detail, wall_time, environment, started_at,
//! finished_at` (`outcomes_Y` only for ok records, `detail` only when set).
//! Every line ends in `\n`. Floats use the shortest representation that
//! parses back to the same `f64`. An empty file is an empty archive.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orchestrator::{RunRecord, RunStatus};

pub const ARCHIVE_SCHEMA: &str = "veritas_archive_v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveHeader {
    pub schema: String,
    pub harness_version: String,
    pub design_fingerprint: String,
}

impl ArchiveHeader {
    pub fn new(design_fingerprint: &str) -> Self {
        ArchiveHeader {
            schema: ARCHIVE_SCHEMA.to_string(),
            harness_version: crate::HARNESS_VERSION.to_string(),
            design_fingerprint: design_fingerprint.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunArchive {
    pub header: Option<ArchiveHeader>,
    pub records: Vec<RunRecord>,
}

impl RunArchive {
    pub fn new(header: ArchiveHeader, records: Vec<RunRecord>) -> Self {
        RunArchive { header: Some(header), records }
    }

    /// Counts for every status, zeros included.
    pub fn status_counts(&self) -> BTreeMap<RunStatus, usize> {
        let mut counts: BTreeMap<RunStatus, usize> = RunStatus::ALL.iter().map(|&s| (s, 0)).collect();
        for r in &self.records {
            *counts.entry(r.status).or_default() += 1;
        }
        counts
    }

    pub fn is_sorted(&self) -> bool {
        self.records.windows(2).all(|w| w[0].trial.index < w[1].trial.index)
    }

    pub fn sort(&mut self) {
        self.records.sort_by_key(|r| r.trial.index);
    }

    /// Header and records, records sorted by trial index with
    /// non-canonical fields masked. Two replicated runs render identically.
    pub fn canonical_string(&self) -> Result<String> {
        let mut c = RunArchive { header: self.header.clone(), records: self.records.iter().map(RunRecord::canonical).collect() };
        c.sort();
        c.to_jsonl()
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        match &self.header {
            Some(h) => {
                out.push_str(&serde_json::to_string(h)?);
                out.push('\n');
            }
            None if self.records.is_empty() => return Ok(out),
            None => return Err(Error::InternalInconsistency("archive records without a header".into())),
        }
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Ok(RunArchive::default());
        }
        let corrupt = |line: usize, reason: String| Error::ArchiveCorrupt { line, reason };
        let lines: Vec<&str> = text.split_inclusive('\n').collect();
        let mut archive = RunArchive::default();
        let mut seen = HashSet::new();
        for (i, raw) in lines.iter().enumerate() {
            let line_no = i + 1;
            let Some(line) = raw.strip_suffix('\n') else {
                return Err(corrupt(line_no, "truncated line (no terminating newline)".into()));
            };
            if i == 0 {
                let header: ArchiveHeader =
                    serde_json::from_str(line).map_err(|e| corrupt(line_no, format!("unreadable header: {e}")))?;
                if header.schema != ARCHIVE_SCHEMA {
                    return Err(corrupt(
                        line_no,
                        format!("schema mismatch: found {:?}, expected {ARCHIVE_SCHEMA:?}", header.schema),
                    ));
                }
                archive.header = Some(header);
                continue;
            }
            let record: RunRecord =
                serde_json::from_str(line).map_err(|e| corrupt(line_no, format!("malformed record: {e}")))?;
            if !seen.insert(record.trial.index) {
                return Err(corrupt(line_no, format!("duplicate trial index {}", record.trial.index)));
            }
            archive.records.push(record);
        }
        Ok(archive)
    }
}

/// Reads an archive; a missing file is an error, an empty one is not.
pub fn read_archive(path: &Path) -> Result<RunArchive> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading archive {}", path.display()), e))?;
    RunArchive::parse(&text)
}

/// Writes the whole archive through a sibling temp file and rename, so a
/// crash never leaves a half-written archive in place.
pub fn write_archive(path: &Path, archive: &RunArchive) -> Result<()> {
    let text = archive.to_jsonl()?;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let ctx = || format!("writing archive {}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(ctx(), e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| Error::io(ctx(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(ctx(), e))?;
    tmp.persist(path).map_err(|e| Error::io(ctx(), e.error))?;
    Ok(())
}

/// Appends records to an archive one complete line at a time.
pub struct ArchiveAppender {
    file: File,
}

impl ArchiveAppender {
    /// Opens `path` for appending, writing `header` first when the file is
    /// new or empty.
    pub fn open(path: &Path, header: &ArchiveHeader) -> Result<Self> {
        let ctx = || format!("opening archive {}", path.display());
        let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| Error::io(ctx(), e))?;
        if file.metadata().map_err(|e| Error::io(ctx(), e))?.len() == 0 {
            let mut line = serde_json::to_string(header)?;
            line.push('\n');
            file.write_all(line.as_bytes()).map_err(|e| Error::io(ctx(), e))?;
            file.flush().map_err(|e| Error::io(ctx(), e))?;
        }
        Ok(ArchiveAppender { file })
    }

    pub fn append(&mut self, record: &RunRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        self.file.write_all(line.as_bytes()).map_err(|e| Error::io("appending to archive", e))?;
        self.file.flush().map_err(|e| Error::io("appending to archive", e))
    }
}
