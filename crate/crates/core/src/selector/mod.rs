//! Test selection as a decision table: pre-test both groups, pick the
//! test for the resulting row, run it and render a verdict.
//!
//! | distribution | variances | tests |
//! |--------------|-----------|-------|
//! | normal | equal | paired t |
//! | normal | unequal | Welch t |
//! | not normal | any | Wilcoxon signed-rank |
//! | mixed | any | Mann–Whitney U (decides), KS (advisory) |
//!
//! Unpaired hypotheses cannot use the paired tests: paired t becomes
//! Welch t and Wilcoxon becomes Mann–Whitney U, with a trace note.

mod classify;
mod units;
mod verdict;

pub use classify::{
    classify, select_test, Classification, Classified, Distribution, NormalityCheck, VarianceCheck, Variances, ALPHA_PRE,
};
pub use units::{group_units, group_values, GroupUnits, UnitKey};
pub use verdict::{
    evaluate_design, evaluate_hypothesis, AnalysisOptions, Decision, SelectionTrace, Verdict, MIN_UNITS,
};
