//! The `veritas` command line, driven in-process: scaffold, validate, run,
//! analyze, report and audit. Each call returns the process exit code.
//!
//! ```text
//! cargo run --example cli_workflow
//! ```
//!
//! Needs `python3` on PATH for the scaffolded executor.

use veritas::cli::{run_cli, MANIFEST_NAME};

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let study = dir.path().join("study");
    let s = |p: &std::path::Path| p.display().to_string();
    let manifest = s(&study.join(MANIFEST_NAME));
    let archive = s(&study.join("runs").join("archive.jsonl"));
    let report = s(&study.join("runs").join("report.json"));

    let steps: Vec<Vec<String>> = vec![
        vec!["init".into(), s(&study)],
        vec!["validate".into(), "--manifest".into(), manifest.clone()],
        vec!["run".into(), "--manifest".into(), manifest.clone(), "--archive".into(), archive.clone(), "--parallelism".into(), "4".into()],
        vec!["analyze".into(), "--manifest".into(), manifest.clone(), "--archive".into(), archive.clone()],
        vec!["report".into(), "--report".into(), report],
        vec!["audit".into(), "--manifest".into(), manifest, "--archive".into(), archive],
    ];
    for args in steps {
        println!("$ veritas {}", args.join(" "));
        let code = run_cli(std::iter::once("veritas".to_string()).chain(args));
        println!("exit {code}\n");
    }
    // The audit exits 5: the scaffold attests nothing and ships no FAIR descriptor.
}
