//! Run trials through an external program and resume an interrupted run.
//!
//! Each trial gets an input JSON file and must write an output JSON file
//! with one value per dependent variable. Non-zero exits, timeouts and bad
//! output are recorded, not raised.
//!
//! ```text
//! cargo run --example run_subprocess
//! ```

use std::time::Duration;

use veritas::model::{DesignBuilder, VariableDomain};
use veritas::orchestrator::{run_experiment, ExecutorConfig, ProcessExecutor};
use veritas::provenance::read_archive;

const PROGRAM: &str = r#"#!/bin/sh
# Reads the trial input, fails on purpose for trial 3, hangs on trial 5.
i=$(sed -n 's/.*"trial_index": \([0-9]*\).*/\1/p' "$1")
[ "$i" = 3 ] && { echo "diverged" >&2; exit 1; }
[ "$i" = 5 ] && sleep 10
printf '{"schema": "veritas_trial_v1", "outcomes": {"loss": %s.25}}' "$i" > "$2"
"#;

fn main() -> veritas::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    std::fs::write(dir.path().join("train.sh"), PROGRAM).expect("write program");

    let design = DesignBuilder::new("subprocess")
        .independent("method", "model", VariableDomain::categorical(["a", "b"]), ["a", "b"])
        .dependent("loss", "training loss", VariableDomain::real())
        .replications(1)
        .seeds(4)
        .master_seed(1)
        .build();

    let mut config = ExecutorConfig::new(["sh", "train.sh", "{input}", "{output}"]);
    config.working_dir = dir.path().to_path_buf();
    config.timeout = Duration::from_millis(500);
    config.parallelism = 4;
    let executor = ProcessExecutor::new(config)?;

    let archive_path = dir.path().join("archive.jsonl");
    let summary = run_experiment(&design, &executor, &archive_path, 4)?;
    println!("first run: {summary:?}");
    for r in read_archive(&archive_path)?.records {
        println!(
            "  trial {} {:<14} {:?} {}",
            r.trial.index,
            r.status.as_str(),
            r.outcomes_y,
            r.detail.unwrap_or_default()
        );
    }

    // Drop the last records, as a crash would, and run again: only the
    // missing trials execute.
    let text = std::fs::read_to_string(&archive_path).expect("read archive");
    let kept: Vec<&str> = text.lines().take(5).collect();
    std::fs::write(&archive_path, kept.join("\n") + "\n").expect("truncate archive");
    let summary = run_experiment(&design, &executor, &archive_path, 2)?;
    println!("resumed run: executed {}, resumed {}", summary.executed, summary.resumed);
    Ok(())
}
