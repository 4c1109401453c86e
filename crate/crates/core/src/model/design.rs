use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Hypothesis, Role, Value, VariableSpec};
use crate::error::{Error, Result};
use crate::provenance::checksum::sha256_hex;

pub const MANIFEST_SCHEMA: &str = "veritas_manifest_v1";
pub const DEFAULT_TRIAL_CAP: u64 = 1_000_000;

/// Publication claims the harness cannot verify itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Attestations {
    pub code_published: bool,
    pub environment_published: bool,
    pub data_published: bool,
    pub model_published: bool,
}

/// Names the independent variables that play a methodological role. The
/// checklist audit reads these; they do not change trial enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Designations {
    /// Categorical factor whose levels are the compared methods (candidate and baselines).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Categorical factor whose levels are datasets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    /// Factors that are tuned hyperparameters.
    pub hyperparameters: Vec<String>,
}

/// How the executor program is launched. Part of the manifest for
/// convenience but excluded from the trial-space fingerprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutorSpec {
    /// Program and arguments; `{input}`, `{output}`, `{artifacts}` and
    /// `{trial}` are substituted per trial.
    pub command: Vec<String>,
    #[serde(default = "default_timeout")]
    pub timeout: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub working_dir: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub env: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
}

fn default_timeout() -> f64 {
    3600.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDesign {
    pub schema: String,
    #[serde(default)]
    pub title: String,
    pub variables: Vec<VariableSpec>,
    /// Levels swept per independent variable. The grid is the Cartesian
    /// product taken in `variables` order, first variable outermost.
    pub factor_grid: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    pub control_bindings: BTreeMap<String, Value>,
    pub replications: u32,
    pub master_seed: u64,
    pub seed_count: u32,
    #[serde(default)]
    pub cv_folds: u32,
    #[serde(default)]
    pub hypotheses: Vec<Hypothesis>,
    #[serde(default)]
    pub attestations: Attestations,
    #[serde(default)]
    pub designations: Designations,
    /// Seeded random subsample of this many grid points (random search);
    /// absent means the full grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_sample: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_cap: Option<u64>,
    /// Item count per dataset level. When present the harness computes
    /// shuffles and fold index lists for trials on that dataset.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dataset_items: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub executor: Option<ExecutorSpec>,
}

/// The subset of a design that determines which trials exist and how they
/// are seeded.
#[derive(Serialize)]
struct TrialSpace<'a> {
    variables: &'a [VariableSpec],
    factor_grid: &'a BTreeMap<String, Vec<Value>>,
    control_bindings: &'a BTreeMap<String, Value>,
    replications: u32,
    master_seed: u64,
    seed_count: u32,
    cv_folds: u32,
    grid_sample: Option<u64>,
    dataset_items: &'a BTreeMap<String, u64>,
}

impl ExperimentDesign {
    pub fn variable(&self, name: &str) -> Option<&VariableSpec> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn variables_with_role(&self, role: Role) -> impl Iterator<Item = &VariableSpec> {
        self.variables.iter().filter(move |v| v.role == role)
    }

    /// Count of variables per role: (independent, control, dependent).
    pub fn role_counts(&self) -> (usize, usize, usize) {
        let count = |r| self.variables_with_role(r).count();
        (count(Role::Independent), count(Role::Control), count(Role::Dependent))
    }

    pub fn hypothesis(&self, id: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.id == id)
    }

    pub fn trial_cap(&self) -> u64 {
        self.trial_cap.unwrap_or(DEFAULT_TRIAL_CAP)
    }

    /// Folds per seed as enumerated: `max(cv_folds, 1)`.
    pub fn fold_slots(&self) -> u32 {
        self.cv_folds.max(1)
    }

    /// Size of the full factor grid, saturating on overflow.
    pub fn full_grid_size(&self) -> u128 {
        self.variables_with_role(Role::Independent)
            .map(|v| self.factor_grid.get(&v.name).map_or(0, |l| l.len()) as u128)
            .fold(1u128, |acc, n| acc.saturating_mul(n))
    }

    pub fn grid_point_count(&self) -> u128 {
        match self.grid_sample {
            Some(k) => (k as u128).min(self.full_grid_size()),
            None => self.full_grid_size(),
        }
    }

    /// Grid points × seeds × folds × replications.
    pub fn trial_count(&self) -> u128 {
        self.grid_point_count()
            .saturating_mul(self.seed_count as u128)
            .saturating_mul(self.fold_slots() as u128)
            .saturating_mul(self.replications as u128)
    }

    /// SHA-256 over the canonical JSON of the trial-defining fields.
    /// Archives record it so a resume cannot mix two designs.
    pub fn fingerprint(&self) -> String {
        let space = TrialSpace {
            variables: &self.variables,
            factor_grid: &self.factor_grid,
            control_bindings: &self.control_bindings,
            replications: self.replications,
            master_seed: self.master_seed,
            seed_count: self.seed_count,
            cv_folds: self.cv_folds,
            grid_sample: self.grid_sample,
            dataset_items: &self.dataset_items,
        };
        let bytes = serde_json::to_vec(&space).expect("trial space serializes");
        sha256_hex(&bytes)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Manifest(e.to_string()))
    }

    /// Loads a manifest; `.json` files are read as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading manifest {}", path.display()), e))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Manifest(e.to_string()))
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = if path.extension().is_some_and(|e| e == "json") {
            serde_json::to_string_pretty(self)?
        } else {
            self.to_toml_string()?
        };
        std::fs::write(path, text).map_err(|e| Error::io(format!("writing manifest {}", path.display()), e))
    }
}
