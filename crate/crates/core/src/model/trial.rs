use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::seed::{derive_seed, mix_seed, GRID_STREAM};
use super::{validate_design, ExperimentDesign, Role, Value};
use crate::error::{Error, Result};
use crate::orchestrator::SplitMix64;

/// Position of a trial in the design: grid point, seed, fold, replication.
/// Ordered lexicographically in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrialCoords {
    pub grid_point: u64,
    pub seed_index: u32,
    pub fold_index: u32,
    pub replication: u32,
}

/// One evaluation point of the experiment function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub index: u64,
    pub coords: TrialCoords,
    #[serde(rename = "bindings_X")]
    pub bindings_x: BTreeMap<String, Value>,
    #[serde(rename = "bindings_C")]
    pub bindings_c: BTreeMap<String, Value>,
    pub derived_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    /// Position in the full mixed-radix grid, before any subsampling.
    pub id: u64,
    pub bindings: BTreeMap<String, Value>,
}

/// Independent variables with their coerced grid levels, in grid order.
fn grid_axes(design: &ExperimentDesign) -> Vec<(&str, Vec<Value>)> {
    design
        .variables_with_role(Role::Independent)
        .map(|v| {
            let levels = design
                .factor_grid
                .get(&v.name)
                .map(|ls| ls.iter().filter_map(|l| v.domain.coerce(l)).collect())
                .unwrap_or_default();
            (v.name.as_str(), levels)
        })
        .collect()
}

fn decode_grid_point(axes: &[(&str, Vec<Value>)], id: u64) -> GridPoint {
    let mut rest = id;
    let mut bindings = BTreeMap::new();
    for (name, levels) in axes.iter().rev() {
        let n = levels.len() as u64;
        bindings.insert(name.to_string(), levels[(rest % n) as usize].clone());
        rest /= n;
    }
    GridPoint { id, bindings }
}

/// Ids of the grid points a design sweeps, ascending.
///
/// With `grid_sample = k` the ids are the first `k` positions of a forward
/// Fisher–Yates pass over `0..full` driven by `SplitMix64(mix_seed(master, [GRID_STREAM]))`:
/// for `i in 0..k`, `j = i + bounded(full - i)`, swap `i` and `j`.
pub fn selected_grid_ids(design: &ExperimentDesign) -> Vec<u64> {
    let full = u64::try_from(design.full_grid_size()).unwrap_or(u64::MAX);
    match design.grid_sample {
        Some(k) if k < full => {
            let mut rng = SplitMix64::new(mix_seed(design.master_seed, &[GRID_STREAM]));
            let mut displaced: HashMap<u64, u64> = HashMap::new();
            let mut picked = Vec::with_capacity(k as usize);
            for i in 0..k {
                let j = i + rng.bounded(full - i);
                let at_i = *displaced.get(&i).unwrap_or(&i);
                let at_j = *displaced.get(&j).unwrap_or(&j);
                displaced.insert(j, at_i);
                picked.push(at_j);
            }
            picked.sort_unstable();
            picked
        }
        _ => (0..full).collect(),
    }
}

pub fn grid_points(design: &ExperimentDesign) -> Vec<GridPoint> {
    let axes = grid_axes(design);
    if axes.iter().any(|(_, l)| l.is_empty()) {
        return Vec::new();
    }
    selected_grid_ids(design).into_iter().map(|id| decode_grid_point(&axes, id)).collect()
}

/// Expands a valid design into its trials in canonical order: grid point
/// outermost, then seed, fold, and replication innermost. `index` is the
/// dense position in that order.
pub fn enumerate_trials(design: &ExperimentDesign) -> Result<Vec<Trial>> {
    let violations = validate_design(design);
    if !violations.is_empty() {
        return Err(Error::InvalidDesign(violations));
    }
    let count = design.trial_count();
    let cap = design.trial_cap();
    if count > cap as u128 {
        return Err(Error::TrialCap { count, cap });
    }

    let controls: BTreeMap<String, Value> = design
        .variables_with_role(Role::Control)
        .filter_map(|v| {
            let bound = design.control_bindings.get(&v.name)?;
            Some((v.name.clone(), v.domain.coerce(bound)?))
        })
        .collect();

    let mut trials = Vec::with_capacity(count as usize);
    for point in grid_points(design) {
        for seed_index in 0..design.seed_count {
            for fold_index in 0..design.fold_slots() {
                for replication in 0..design.replications {
                    let coords = TrialCoords { grid_point: point.id, seed_index, fold_index, replication };
                    trials.push(Trial {
                        index: trials.len() as u64,
                        coords,
                        bindings_x: point.bindings.clone(),
                        bindings_c: controls.clone(),
                        derived_seed: derive_seed(design.master_seed, &coords),
                    });
                }
            }
        }
    }
    Ok(trials)
}
