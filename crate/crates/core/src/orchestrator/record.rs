use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EnvironmentInfo;
use crate::model::{Trial, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    Failed,
    Timeout,
    InvalidOutput,
}

impl RunStatus {
    pub const ALL: [RunStatus; 4] = [RunStatus::Ok, RunStatus::Failed, RunStatus::Timeout, RunStatus::InvalidOutput];

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Failed => "failed",
            RunStatus::Timeout => "timeout",
            RunStatus::InvalidOutput => "invalid-output",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One executed trial. Serialized field order is the archive's canonical
/// order. `wall_time`, `started_at` and `finished_at` are non-canonical:
/// [`RunRecord::canonical`] masks them for determinism comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub trial: Trial,
    pub status: RunStatus,
    #[serde(rename = "outcomes_Y", default, skip_serializing_if = "Option::is_none")]
    pub outcomes_y: Option<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Seconds.
    pub wall_time: f64,
    pub environment: EnvironmentInfo,
    pub started_at: String,
    pub finished_at: String,
}

impl RunRecord {
    pub fn canonical(&self) -> RunRecord {
        RunRecord { wall_time: 0.0, started_at: String::new(), finished_at: String::new(), ..self.clone() }
    }

    pub fn outcome(&self, metric: &str) -> Option<&Value> {
        self.outcomes_y.as_ref()?.get(metric)
    }

    pub fn is_ok(&self) -> bool {
        self.status == RunStatus::Ok
    }
}
