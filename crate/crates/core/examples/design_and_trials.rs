//! Declare an experiment, check it, and expand it into seeded trials.
//!
//! ```text
//! cargo run --example design_and_trials
//! ```

use veritas::model::{
    enumerate_trials, validate_design, DesignBuilder, Direction, GroupSelector, Hypothesis, VariableDomain,
};

fn main() -> veritas::Result<()> {
    let design = DesignBuilder::new("dropout sweep")
        .independent("method", "model under comparison", VariableDomain::categorical(["mlp", "mlp+dropout"]), ["mlp", "mlp+dropout"])
        .independent("dataset", "benchmark", VariableDomain::categorical(["iris", "wine"]), ["iris", "wine"])
        .independent("lr", "learning rate", VariableDomain::real_bounded(0.0, 1.0), [0.01, 0.1])
        .control("epochs", "training epochs", VariableDomain::integer(), 20i64)
        .dependent("accuracy", "held-out accuracy", VariableDomain::real_bounded(0.0, 1.0))
        .replications(2)
        .seeds(3)
        .folds(5)
        .master_seed(7)
        .method_factor("method")
        .dataset_factor("dataset")
        .hyperparameter("lr")
        .hypothesis(
            Hypothesis::compare(
                "H1",
                "accuracy",
                GroupSelector::single("method", "mlp+dropout"),
                GroupSelector::single("method", "mlp"),
            )
            .with_direction(Direction::Greater),
        )
        .build();

    let violations = validate_design(&design);
    println!("violations: {}", violations.len());
    println!("H0: {}", design.hypotheses[0].statement_null);
    println!("Ha: {}", design.hypotheses[0].statement_alt);
    println!("fingerprint: {}", design.fingerprint());

    let trials = enumerate_trials(&design)?;
    println!("{} trials (expected {})", trials.len(), design.trial_count());
    for t in trials.iter().take(4).chain(trials.last()) {
        let c = t.coords;
        println!(
            "  #{:<3} grid {} seed {} fold {} rep {}  {:?}  seed {:#018x}",
            t.index, c.grid_point, c.seed_index, c.fold_index, c.replication, t.bindings_x, t.derived_seed
        );
    }

    // The manifest form is plain TOML.
    let toml = design.to_toml_string()?;
    println!("\n{}", toml.lines().take(12).collect::<Vec<_>>().join("\n"));

    // A broken copy reports where it is broken.
    let mut broken = design.clone();
    broken.seed_count = 0;
    broken.hypotheses[0].metric = "lr".into();
    for v in validate_design(&broken) {
        println!("violation {v}");
    }
    Ok(())
}
