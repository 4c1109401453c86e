//! In-process experiment, verdicts and the structured report.
//!
//! ```text
//! cargo run --example analyze_and_report
//! ```

use std::collections::BTreeMap;

use veritas::model::{DesignBuilder, GroupSelector, Hypothesis, Value, VariableDomain};
use veritas::orchestrator::{run_experiment, FnExecutor, SplitMix64};
use veritas::provenance::{generate_report, read_archive, render_text};
use veritas::selector::{evaluate_design, AnalysisOptions};

/// Standard normal draw from a trial seed (Box-Muller).
fn gaussian(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let u1 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn main() -> veritas::Result<()> {
    let design = DesignBuilder::new("augmentation study")
        .independent("method", "model", VariableDomain::categorical(["plain", "augmented"]), ["plain", "augmented"])
        .independent("dataset", "benchmark", VariableDomain::categorical(["cifar-s", "svhn-s"]), ["cifar-s", "svhn-s"])
        .dependent("error", "test error in percent", VariableDomain::real_bounded(0.0, 100.0))
        .replications(2)
        .seeds(5)
        .folds(3)
        .master_seed(31)
        .method_factor("method")
        .dataset_factor("dataset")
        .hypothesis(Hypothesis::compare(
            "H1",
            "error",
            GroupSelector::single("method", "augmented"),
            GroupSelector::single("method", "plain"),
        ))
        .hypothesis(Hypothesis::compare(
            "H2",
            "error",
            GroupSelector::single("dataset", "svhn-s"),
            GroupSelector::single("dataset", "cifar-s"),
        ))
        .build();

    // Stand-in for training: augmentation lowers the error by about 1.5 points.
    let executor = FnExecutor::new("simulated training", |t| {
        let x = &t.bindings_x;
        let mut error = if x["dataset"] == Value::from("svhn-s") { 8.0 } else { 12.0 };
        if x["method"] == Value::from("augmented") {
            error -= 1.5;
        }
        error += gaussian(t.derived_seed);
        Ok(BTreeMap::from([("error".to_string(), Value::Real(error))]))
    });

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("archive.jsonl");
    let summary = run_experiment(&design, &executor, &path, 4)?;
    println!("{} trials, all ok: {}", summary.total_trials, summary.all_ok());

    let archive = read_archive(&path)?;
    let options = AnalysisOptions { holm: true, ..Default::default() };
    let verdicts = evaluate_design(&design, &archive.records, &options)?;
    for v in &verdicts {
        println!("{}: {} via {} (adjusted p {:.3e})", v.hypothesis_id, v.decision.as_str(), v.primary.method, v.p_value);
        for line in &v.trace.rationale {
            println!("    {line}");
        }
    }

    let report = generate_report(&design, &archive, &verdicts, &options)?;
    println!("\n{}", render_text(&report));
    let json = report.to_json()?;
    println!("report.json is {} bytes; first lines:\n{}", json.len(), json.lines().take(6).collect::<Vec<_>>().join("\n"));
    Ok(())
}
