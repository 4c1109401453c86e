mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use common::{label, outcome, seeded_normal};
use veritas::model::seed::split_seed;
use veritas::model::{enumerate_trials, DesignBuilder, ExperimentDesign, GroupSelector, Hypothesis, Value, VariableDomain};
use veritas::orchestrator::{
    partition_folds, run_experiment, shuffle_indices, ExecutorConfig, FnExecutor, ProcessExecutor, RunStatus, TrialInput,
};
use veritas::provenance::read_archive;
use veritas::Error;

fn design() -> ExperimentDesign {
    DesignBuilder::new("orchestration")
        .independent("method", "model", VariableDomain::categorical(["a", "b"]), ["a", "b"])
        .independent("dataset", "data", VariableDomain::categorical(["d1", "d2"]), ["d1", "d2"])
        .dependent("score", "score", VariableDomain::real_bounded(-100.0, 100.0))
        .replications(2)
        .seeds(2)
        .folds(3)
        .master_seed(5)
        .method_factor("method")
        .dataset_factor("dataset")
        .dataset_items("d1", 20)
        .dataset_items("d2", 11)
        .hypothesis(Hypothesis::compare("H1", "score", GroupSelector::single("method", "b"), GroupSelector::single("method", "a")))
        .build()
}

fn noise_executor() -> FnExecutor<impl Fn(&TrialInput) -> Result<BTreeMap<String, Value>, String> + Sync> {
    FnExecutor::new("noise", |t| Ok(outcome("score", seeded_normal(t.derived_seed, 0))))
}

fn script(dir: &Path, name: &str, body: &str) -> ExecutorConfig {
    std::fs::write(dir.join(name), body).unwrap();
    let mut cfg = ExecutorConfig::new(["sh", name, "{input}", "{output}"]);
    cfg.working_dir = dir.to_path_buf();
    cfg.timeout = Duration::from_secs(30);
    cfg
}

#[test]
fn every_trial_is_recorded_once_in_index_order() {
    let dir = tempfile::tempdir().unwrap();
    let d = design();
    let path = dir.path().join("a.jsonl");
    let summary = run_experiment(&d, &noise_executor(), &path, 4).unwrap();
    assert_eq!(summary.total_trials, 48);
    assert_eq!(summary.executed, 48);
    assert_eq!(summary.resumed, 0);
    assert!(summary.all_ok());

    let archive = read_archive(&path).unwrap();
    assert_eq!(archive.header.as_ref().unwrap().design_fingerprint, d.fingerprint());
    let trials = enumerate_trials(&d).unwrap();
    assert_eq!(archive.records.len(), trials.len());
    for (r, t) in archive.records.iter().zip(&trials) {
        assert_eq!(r.trial, *t);
        assert_eq!(r.environment.executor, "noise");
        assert!(r.wall_time >= 0.0);
    }
}

#[test]
fn parallel_runs_match_serial_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = design();
    let mut canon = Vec::new();
    for (i, p) in [1, 3, 16].into_iter().enumerate() {
        let path = dir.path().join(format!("{i}.jsonl"));
        run_experiment(&d, &noise_executor(), &path, p).unwrap();
        canon.push(read_archive(&path).unwrap().canonical_string().unwrap());
    }
    assert_eq!(canon[0], canon[1]);
    assert_eq!(canon[0], canon[2]);
}

#[test]
fn resume_completes_exactly_the_missing_trials() {
    let dir = tempfile::tempdir().unwrap();
    let d = design();
    let full = dir.path().join("full.jsonl");
    run_experiment(&d, &noise_executor(), &full, 2).unwrap();
    let text = std::fs::read_to_string(&full).unwrap();
    let lines: Vec<&str> = text.lines().collect();

    for keep in [0usize, 1, 17, 48] {
        // Header plus an arbitrary subset of records, as an interrupted parallel run leaves.
        let kept: Vec<&str> = std::iter::once(lines[0]).chain(lines[1..].iter().rev().take(keep).copied()).collect();
        let path = dir.path().join(format!("resume-{keep}.jsonl"));
        std::fs::write(&path, kept.join("\n") + "\n").unwrap();

        let calls = AtomicUsize::new(0);
        let exec = FnExecutor::new("noise", |t| {
            calls.fetch_add(1, Ordering::Relaxed);
            Ok(outcome("score", seeded_normal(t.derived_seed, 0)))
        });
        let summary = run_experiment(&d, &exec, &path, 3).unwrap();
        assert_eq!(calls.load(Ordering::Relaxed), 48 - keep);
        assert_eq!((summary.executed, summary.resumed), (48 - keep, keep));
        assert_eq!(
            read_archive(&path).unwrap().canonical_string().unwrap(),
            read_archive(&full).unwrap().canonical_string().unwrap()
        );
    }
}

#[test]
fn rerun_of_a_complete_archive_is_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let d = design();
    let path = dir.path().join("a.jsonl");
    run_experiment(&d, &noise_executor(), &path, 2).unwrap();
    let before = std::fs::read(&path).unwrap();
    let summary = run_experiment(&d, &noise_executor(), &path, 2).unwrap();
    assert_eq!((summary.executed, summary.resumed), (0, 48));
    assert_eq!(std::fs::read(&path).unwrap(), before);
}

#[test]
fn archive_of_another_design_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.jsonl");
    run_experiment(&design(), &noise_executor(), &path, 2).unwrap();
    let mut other = design();
    other.master_seed = 6;
    assert!(matches!(run_experiment(&other, &noise_executor(), &path, 2), Err(Error::ArchiveMismatch { .. })));
}

#[test]
fn corrupt_archives_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.jsonl");
    run_experiment(&design(), &noise_executor(), &path, 2).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();

    let truncated = &text[..text.len() - 10];
    std::fs::write(&path, truncated).unwrap();
    assert!(matches!(read_archive(&path), Err(Error::ArchiveCorrupt { line: 49, .. })));

    let lines: Vec<&str> = text.lines().collect();
    let duplicated = format!("{}\n{}\n{}\n", lines[0], lines[1], lines[1]);
    std::fs::write(&path, duplicated).unwrap();
    assert!(matches!(read_archive(&path), Err(Error::ArchiveCorrupt { line: 3, .. })));

    let wrong_schema = text.replacen("veritas_archive_v1", "other_v9", 1);
    std::fs::write(&path, wrong_schema).unwrap();
    assert!(matches!(read_archive(&path), Err(Error::ArchiveCorrupt { line: 1, .. })));
}

#[test]
fn zero_parallelism_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.jsonl");
    assert!(matches!(run_experiment(&design(), &noise_executor(), &path, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn closure_failures_and_domain_violations_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.jsonl");
    let exec = FnExecutor::new("flaky", |t| match t.trial_index % 4 {
        0 => Err("boom".into()),
        1 => Ok(outcome("score", 1000.0)),
        2 => Ok(outcome("other", 1.0)),
        _ => Ok(outcome("score", 1.0)),
    });
    let summary = run_experiment(&design(), &exec, &path, 2).unwrap();
    assert_eq!(summary.counts[&RunStatus::Failed], 12);
    assert_eq!(summary.counts[&RunStatus::InvalidOutput], 24);
    assert_eq!(summary.counts[&RunStatus::Ok], 12);
    assert!(!summary.all_ok());
    let archive = read_archive(&path).unwrap();
    assert_eq!(archive.records[0].detail.as_deref(), Some("boom"));
    assert!(archive.records[1].outcomes_y.is_none());
}

const ECHO: &str = r#"
i=$(sed -n 's/.*"trial_index": \([0-9]*\).*/\1/p' "$1")
printf '{"schema": "veritas_trial_v1", "outcomes": {"score": %s.5}}' $((i % 7)) > "$2"
"#;

#[test]
fn subprocess_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let d = {
        let mut d = design();
        d.seed_count = 1;
        d.cv_folds = 0;
        d.replications = 1;
        d.dataset_items.clear();
        d
    };
    let cases: [(&str, &str, RunStatus); 6] = [
        ("ok.sh", ECHO, RunStatus::Ok),
        ("fail.sh", "echo broken >&2; exit 3", RunStatus::Failed),
        ("slow.sh", "sleep 5", RunStatus::Timeout),
        ("garbage.sh", "echo 'not json' > \"$2\"", RunStatus::InvalidOutput),
        ("silent.sh", "exit 0", RunStatus::InvalidOutput),
        (
            "schema.sh",
            "echo '{\"schema\": \"v0\", \"outcomes\": {\"score\": 1.0}}' > \"$2\"",
            RunStatus::InvalidOutput,
        ),
    ];
    for (name, body, expected) in cases {
        let mut cfg = script(dir.path(), name, body);
        cfg.timeout = Duration::from_millis(300);
        cfg.parallelism = 2;
        let exec = ProcessExecutor::new(cfg).unwrap();
        let path = dir.path().join(format!("{name}.jsonl"));
        let summary = run_experiment(&d, &exec, &path, 2).unwrap();
        assert_eq!(summary.counts.get(&expected), Some(&4), "{name}: {:?}", summary.counts);
        let archive = read_archive(&path).unwrap();
        assert_eq!(archive.records[0].environment.executor, format!("sh {name} {{input}} {{output}}"));
        if expected == RunStatus::Failed {
            assert!(archive.records[0].detail.as_deref().unwrap().contains("broken"));
        }
        if expected == RunStatus::Ok {
            for r in &archive.records {
                assert_eq!(r.outcome("score"), Some(&Value::Real((r.trial.index % 7) as f64 + 0.5)));
            }
        }
    }
}

#[test]
fn missing_program_is_a_failed_trial() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExecutorConfig::new(["/nonexistent/program", "{input}"]);
    cfg.working_dir = dir.path().to_path_buf();
    let exec = ProcessExecutor::new(cfg).unwrap();
    let mut d = design();
    d.seed_count = 1;
    let summary = run_experiment(&d, &exec, &dir.path().join("a.jsonl"), 1).unwrap();
    assert_eq!(summary.counts[&RunStatus::Failed], summary.total_trials);
}

#[test]
fn executor_config_is_validated() {
    assert!(ProcessExecutor::new(ExecutorConfig::new(Vec::<String>::new())).is_err());
    let mut cfg = ExecutorConfig::new(["true"]);
    cfg.timeout = Duration::ZERO;
    assert!(ProcessExecutor::new(cfg).is_err());
}

#[test]
fn artifact_directories_are_kept_only_when_written() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{ECHO}\n[ \"$3\" = 1 ] && echo kept > \"$VERITAS_ARTIFACTS/model.txt\"\nexit 0");
    let mut cfg = script(dir.path(), "art.sh", &body);
    cfg.command = vec!["sh".into(), "art.sh".into(), "{input}".into(), "{output}".into(), "{trial}".into()];
    let root = dir.path().join("artifacts");
    cfg.artifact_root = Some(root.clone());
    let mut d = design();
    d.seed_count = 1;
    d.cv_folds = 0;
    d.replications = 1;
    let summary = run_experiment(&d, &ProcessExecutor::new(cfg).unwrap(), &dir.path().join("a.jsonl"), 1).unwrap();
    assert!(summary.all_ok());
    let kept: Vec<_> = std::fs::read_dir(&root).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(kept, vec![std::ffi::OsString::from("trial-000001")]);
    assert_eq!(std::fs::read_to_string(root.join("trial-000001/model.txt")).unwrap(), "kept\n");
}

#[test]
fn folds_partition_every_dataset_and_share_splits_across_methods() {
    let d = design();
    let trials = enumerate_trials(&d).unwrap();
    let inputs: Vec<TrialInput> = trials.iter().map(|t| TrialInput::build(&d, t).unwrap()).collect();
    let mut tests_by_split: BTreeMap<(String, u32), Vec<Vec<u64>>> = BTreeMap::new();
    for input in &inputs {
        let data = input.data.as_ref().unwrap();
        let folds = input.folds.as_ref().unwrap();
        let n = data.items;
        assert_eq!(n, if label(input, "dataset") == "d1" { 20 } else { 11 });
        let mut order = data.order.clone();
        order.sort_unstable();
        assert_eq!(order, (0..n).collect::<Vec<_>>());
        assert_eq!(data.train.len() + data.test.len(), n as usize);
        assert!(data.test.windows(2).all(|w| w[0] < w[1]));
        assert!(data.train.iter().all(|i| !data.test.contains(i)));
        assert_eq!(folds.split_seed, split_seed(d.master_seed, input.coords.seed_index));
        let key = (label(input, "dataset").to_string(), input.coords.seed_index);
        let per_fold = tests_by_split.entry(key).or_insert_with(|| vec![Vec::new(); 3]);
        let slot = &mut per_fold[folds.index as usize];
        if slot.is_empty() {
            *slot = data.test.clone();
        } else {
            assert_eq!(*slot, data.test, "methods and replications share one split");
        }
    }
    for ((dataset, _), folds) in tests_by_split {
        let mut all: Vec<u64> = folds.concat();
        all.sort_unstable();
        let n = if dataset == "d1" { 20 } else { 11 };
        assert_eq!(all, (0..n).collect::<Vec<_>>(), "test folds partition {dataset}");
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }
}

#[test]
fn shuffles_and_partitions_are_seeded() {
    assert_eq!(shuffle_indices(100, 1), shuffle_indices(100, 1));
    assert_ne!(shuffle_indices(100, 1), shuffle_indices(100, 2));
    assert!(partition_folds(3, 4, 0).is_err());
    assert!(partition_folds(3, 0, 0).is_err());
    let folds = partition_folds(10, 3, 9).unwrap();
    let mut counts = [0; 3];
    folds.iter().for_each(|&f| counts[f] += 1);
    assert_eq!(counts, [4, 3, 3]);
}
