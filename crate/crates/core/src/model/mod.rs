//! Experiment variables, hypotheses and designs, and their expansion into
//! seeded trials.
//!
//! A design declares independent variables (swept over `factor_grid`),
//! control variables (one fixed binding each) and dependent variables
//! (observed). Datasets, compared methods and hyperparameters are all
//! ordinary independent factors; [`Designations`] only labels them for the
//! audit. Control bindings are global: they cannot vary per dataset.

mod builder;
mod design;
mod domain;
mod hypothesis;
pub mod seed;
mod trial;
mod validate;

pub use builder::DesignBuilder;
pub use design::{
    Attestations, Designations, ExecutorSpec, ExperimentDesign, DEFAULT_TRIAL_CAP, MANIFEST_SCHEMA,
};
pub use domain::{Role, Value, VariableDomain, VariableSpec};
pub use hypothesis::{Direction, GroupSelector, Hypothesis, Pairing};
pub use seed::derive_seed;
pub use trial::{enumerate_trials, grid_points, selected_grid_ids, GridPoint, Trial, TrialCoords};
pub use validate::{validate_design, Violation};
