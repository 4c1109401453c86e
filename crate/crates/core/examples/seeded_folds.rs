//! Deterministic shuffles and k-fold splits, and what a trial receives.
//!
//! ```text
//! cargo run --example seeded_folds
//! ```

use veritas::model::{enumerate_trials, DesignBuilder, VariableDomain};
use veritas::orchestrator::{fold_split, partition_folds, shuffle_indices, TrialInput};

fn main() -> veritas::Result<()> {
    println!("shuffle(10, seed 1) = {:?}", shuffle_indices(10, 1));
    println!("shuffle(10, seed 1) = {:?}  (same seed, same order)", shuffle_indices(10, 1));

    let folds = partition_folds(11, 3, 42)?;
    println!("fold of each item: {folds:?}");
    for k in 0..3 {
        let (train, test) = fold_split(&folds, k);
        println!("  fold {k}: test {test:?}, {} train items", train.len());
    }

    // With dataset sizes declared, the harness computes each trial's split.
    let design = DesignBuilder::new("folds")
        .independent("method", "model", VariableDomain::categorical(["a", "b"]), ["a", "b"])
        .independent("dataset", "data", VariableDomain::categorical(["toy"]), ["toy"])
        .dependent("score", "score", VariableDomain::real())
        .replications(1)
        .seeds(2)
        .folds(3)
        .master_seed(2024)
        .dataset_factor("dataset")
        .dataset_items("toy", 9)
        .build();
    for t in enumerate_trials(&design)? {
        let input = TrialInput::build(&design, &t)?;
        let (folds, data) = (input.folds.unwrap(), input.data.unwrap());
        println!(
            "trial {} method {} seed {} fold {}/{}: test {:?}",
            t.index, t.bindings_x["method"], t.coords.seed_index, folds.index, folds.count, data.test
        );
    }
    println!("methods at the same seed index see the same test folds");
    Ok(())
}
