//! Descriptive statistics, normality and variance pre-tests, and the five
//! two-group comparison tests, with the special functions they need.
//!
//! Exact null distributions are used for small samples:
//!
//! | test | exact when |
//! |------|------------|
//! | Wilcoxon signed-rank | n <= 25 non-zero differences |
//! | Mann–Whitney U | n_a * n_b <= 64 and no ties |
//! | Kolmogorov–Smirnov | C(n_a + n_b, n_a) <= 20000 |
//!
//! Outside those limits, or with [`Mode::Approx`], the rank tests use the
//! normal approximation with tie and continuity corrections and KS uses
//! the Kolmogorov distribution with effective size `n_a n_b / (n_a + n_b)`.
//! Requesting [`Mode::Exact`] beyond a limit falls back with a warning.

mod describe;
mod effect;
mod ks;
mod levene;
mod mann_whitney;
mod multiplicity;
mod ranks;
pub mod shapiro;
pub mod special;
mod ttest;
mod types;
mod wilcoxon;

pub use describe::{confidence_interval, describe, mean, median, variance, Description};
pub use effect::{cohens_d, cohens_d_paired};
pub use ks::{ks_two_sample, EXACT_MAX_LABELINGS};
pub use levene::levene;
pub use mann_whitney::{mann_whitney_u, EXACT_MAX_PRODUCT};
pub use multiplicity::holm_adjust;
pub use ranks::average_ranks;
pub use shapiro::shapiro_wilk;
pub use special::{kolmogorov_sf, normal_cdf, normal_quantile, t_cdf, t_quantile};
pub use ttest::{paired_t, welch_df, welch_t};
pub use types::{
    ConfidenceInterval, EffectKind, EffectSize, Method, Mode, PMode, PairedSamples, Sample, TestResult,
};
pub use wilcoxon::{wilcoxon_signed_rank, EXACT_MAX_N};
