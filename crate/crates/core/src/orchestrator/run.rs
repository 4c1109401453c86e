use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::Serialize;

use super::{execute_trial, EnvironmentInfo, RunRecord, RunStatus, TrialExecutor};
use crate::error::{Error, Result};
use crate::model::{enumerate_trials, ExperimentDesign};
use crate::provenance::archive::{read_archive, write_archive, ArchiveAppender, ArchiveHeader, RunArchive};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub total_trials: usize,
    /// Trials executed by this invocation.
    pub executed: usize,
    /// Trials found already recorded and skipped.
    pub resumed: usize,
    /// Status counts over the whole archive after the run.
    pub counts: BTreeMap<RunStatus, usize>,
}

impl RunSummary {
    pub fn all_ok(&self) -> bool {
        self.counts.iter().all(|(s, &n)| *s == RunStatus::Ok || n == 0)
    }
}

/// Executes every trial of `design` that `archive_path` does not already
/// hold, with up to `parallelism` concurrent trials, then finalizes the
/// archive in trial-index order.
///
/// A trial counts as done once any record exists for it; failed trials are
/// not retried. Records are appended as they complete, so an interrupted
/// run resumes where it stopped. Finalization rewrites the file only when
/// the records are out of index order, leaving record contents untouched.
pub fn run_experiment<E: TrialExecutor + ?Sized>(
    design: &ExperimentDesign,
    executor: &E,
    archive_path: &Path,
    parallelism: usize,
) -> Result<RunSummary> {
    if parallelism < 1 {
        return Err(Error::InvalidArgument("parallelism must be at least 1".into()));
    }
    let trials = enumerate_trials(design)?;
    let fingerprint = design.fingerprint();
    let header = ArchiveHeader::new(&fingerprint);

    let existing = if archive_path.exists() { read_archive(archive_path)? } else { RunArchive::default() };
    if let Some(found) = &existing.header {
        if found.design_fingerprint != fingerprint {
            return Err(Error::ArchiveMismatch {
                path: archive_path.to_path_buf(),
                found: found.design_fingerprint.clone(),
                expected: fingerprint,
            });
        }
    }
    for r in &existing.records {
        match trials.get(r.trial.index as usize) {
            Some(t) if *t == r.trial => {}
            _ => {
                return Err(Error::ArchiveCorrupt {
                    line: 0,
                    reason: format!("record for trial {} does not match the design", r.trial.index),
                })
            }
        }
    }
    let done: HashSet<u64> = existing.records.iter().map(|r| r.trial.index).collect();
    let pending: Vec<_> = trials.iter().filter(|t| !done.contains(&t.index)).collect();

    let mut appender = ArchiveAppender::open(archive_path, &header)?;
    let environment = EnvironmentInfo::capture(&executor.describe());
    let mut records = existing.records;
    let resumed = records.len();

    if !pending.is_empty() {
        let next = AtomicUsize::new(0);
        let stop = AtomicBool::new(false);
        let (tx, rx) = mpsc::channel::<RunRecord>();
        let workers = parallelism.min(pending.len());
        let write_result = std::thread::scope(|scope| {
            for _ in 0..workers {
                let tx = tx.clone();
                let (next, stop, pending, environment) = (&next, &stop, &pending, &environment);
                scope.spawn(move || loop {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(trial) = pending.get(i) else { break };
                    let record = execute_trial(design, trial, executor, environment);
                    if tx.send(record).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            // Single writer: records are appended in completion order.
            for record in rx {
                if let Err(e) = appender.append(&record) {
                    stop.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                records.push(record);
            }
            Ok(())
        });
        write_result?;
    }
    drop(appender);

    let mut archive = RunArchive::new(header, records);
    if !archive.is_sorted() {
        archive.sort();
        write_archive(archive_path, &archive)?;
    }
    Ok(RunSummary {
        total_trials: trials.len(),
        executed: archive.records.len() - resumed,
        resumed,
        counts: archive.status_counts(),
    })
}
