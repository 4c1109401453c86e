use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ExperimentDesign, Hypothesis};
use crate::orchestrator::RunRecord;

/// Analysis unit within a group: every trial coordinate except the
/// hypothesis factors and the replication index (and optionally the fold).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnitKey {
    pub factors: Vec<(String, String)>,
    pub seed_index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold_index: Option<u32>,
}

impl fmt::Display for UnitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.factors {
            write!(f, "{k}={v}, ")?;
        }
        write!(f, "seed={}", self.seed_index)?;
        if let Some(fold) = self.fold_index {
            write!(f, ", fold={fold}")?;
        }
        Ok(())
    }
}

/// Per-group unit means, plus how many ok records went into them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupUnits {
    pub a: BTreeMap<UnitKey, f64>,
    pub b: BTreeMap<UnitKey, f64>,
    pub records_a: usize,
    pub records_b: usize,
}

/// Ok-record outcomes of `h.metric` for one group selector, in archive
/// order. Fails if the metric is not numeric.
pub fn group_values<'r>(
    design: &ExperimentDesign,
    h: &Hypothesis,
    group_b: bool,
    records: &'r [RunRecord],
) -> Result<Vec<(&'r RunRecord, f64)>> {
    let selector = if group_b { &h.group_b } else { &h.group_a }.normalized(design);
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.is_ok() && selector.matches(&r.trial.bindings_x)) {
        let value = r.outcome(&h.metric).ok_or_else(|| {
            Error::InternalInconsistency(format!("ok record for trial {} lacks outcome {}", r.trial.index, h.metric))
        })?;
        let x = value.as_f64().ok_or_else(|| {
            Error::InvalidArgument(format!("hypothesis {}: metric {} is not numeric ({value})", h.id, h.metric))
        })?;
        out.push((r, x));
    }
    Ok(out)
}

/// Collect both groups and mean-aggregate replications sharing a unit key.
/// Folds are kept as separate units unless `aggregate_folds` is set.
pub fn group_units(
    design: &ExperimentDesign,
    h: &Hypothesis,
    records: &[RunRecord],
    aggregate_folds: bool,
) -> Result<GroupUnits> {
    let skip = h.factor_names();
    let key_of = |r: &RunRecord| UnitKey {
        factors: r
            .trial
            .bindings_x
            .iter()
            .filter(|(k, _)| !skip.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
        seed_index: r.trial.coords.seed_index,
        fold_index: (!aggregate_folds).then_some(r.trial.coords.fold_index),
    };
    let mut units = GroupUnits::default();
    for group_b in [false, true] {
        let values = group_values(design, h, group_b, records)?;
        let mut sums: BTreeMap<UnitKey, (f64, usize)> = BTreeMap::new();
        for (r, x) in &values {
            let e = sums.entry(key_of(r)).or_insert((0.0, 0));
            e.0 += x;
            e.1 += 1;
        }
        let means = sums.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect();
        if group_b {
            units.b = means;
            units.records_b = values.len();
        } else {
            units.a = means;
            units.records_a = values.len();
        }
    }
    Ok(units)
}
