//! Trial execution: seeded shuffles and folds, executors, and the
//! resumable run loop.

mod environment;
mod executor;
mod partition;
mod record;
mod run;

pub use environment::{EnvironmentInfo, UNKNOWN};
pub use executor::{
    execute_trial, validate_outcomes, DataSpec, ExecutorConfig, FnExecutor, FoldSpec, ProcessExecutor, RawOutcome,
    TrialExecutor, TrialInput, TrialOutput, TRIAL_SCHEMA,
};
pub use partition::{fold_split, partition_folds, shuffle_indices, SplitMix64};
pub use record::{RunRecord, RunStatus};
pub use run::{run_experiment, RunSummary};
