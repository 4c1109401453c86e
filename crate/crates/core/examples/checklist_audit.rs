//! Audit a study against the 16-item methodology checklist, then fix what
//! it flags.
//!
//! ```text
//! cargo run --example checklist_audit
//! ```

use std::collections::BTreeMap;

use veritas::model::{Attestations, DesignBuilder, GroupSelector, Hypothesis, Value, VariableDomain};
use veritas::orchestrator::{run_experiment, FnExecutor};
use veritas::provenance::{audit_checklist, generate_report, read_archive, DatasetReference, FairDescriptor};
use veritas::selector::{evaluate_design, AnalysisOptions};

fn main() -> veritas::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut design = DesignBuilder::new("audited study")
        .independent("method", "compared models", VariableDomain::categorical(["svm", "forest"]), ["svm", "forest"])
        .independent("dataset", "benchmark datasets", VariableDomain::categorical(["adult", "credit"]), ["adult", "credit"])
        .independent("depth", "tree depth / kernel degree", VariableDomain::integer(), [2i64, 4])
        .control("budget", "training time budget in seconds", VariableDomain::integer(), 60i64)
        .dependent("f1", "macro F1 on the test fold", VariableDomain::real_bounded(0.0, 1.0))
        .replications(2)
        .seeds(3)
        .folds(2)
        .master_seed(5)
        .method_factor("method")
        .dataset_factor("dataset")
        .hyperparameter("depth")
        .hypothesis(Hypothesis::compare(
            "H1",
            "f1",
            GroupSelector::single("method", "forest"),
            GroupSelector::single("method", "svm"),
        ))
        .build();

    let executor = FnExecutor::new("simulated", |t| {
        let jitter = (t.derived_seed % 1000) as f64 / 20_000.0;
        let base = if t.bindings_x["method"] == Value::from("forest") { 0.74 } else { 0.71 };
        Ok(BTreeMap::from([("f1".to_string(), Value::Real(base + jitter))]))
    });
    let path = dir.path().join("archive.jsonl");
    run_experiment(&design, &executor, &path, 4)?;
    let archive = read_archive(&path)?;
    let options = AnalysisOptions::default();
    let verdicts = evaluate_design(&design, &archive.records, &options)?;
    let report = generate_report(&design, &archive, &verdicts, &options)?;

    // Nothing attested and no FAIR descriptor yet.
    let first = audit_checklist(&design, Some(&archive), Some(&report), None);
    println!("{}", first.render_table());

    // Publish code, environment, data and models, and describe the data.
    design.attestations =
        Attestations { code_published: true, environment_published: true, data_published: true, model_published: true };
    let data = dir.path().join("adult.csv");
    std::fs::write(&data, "age,income\n39,<=50K\n").expect("write data");
    let mut fair = FairDescriptor::new("doi:10.5281/zenodo.1234567", "audited study", "CC-BY-4.0");
    let mut reference = DatasetReference::from_file("adult", &data)?;
    reference.source = "https://archive.ics.uci.edu/dataset/2/adult".into();
    fair.datasets.push(reference);

    let second = audit_checklist(&design, Some(&archive), Some(&report), Some(&fair));
    println!("{}", second.render_table());
    println!("audit passed: {}", second.passed());
    Ok(())
}
