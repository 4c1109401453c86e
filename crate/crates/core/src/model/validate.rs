use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{grid_points, ExperimentDesign, Role, MANIFEST_SCHEMA};

/// One broken design invariant, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation { path: path.into(), message: message.into() });
    }
}

/// Checks every structural invariant of a design. An empty list means the
/// design can be enumerated.
pub fn validate_design(design: &ExperimentDesign) -> Vec<Violation> {
    let mut out = Collector(Vec::new());

    if design.schema != MANIFEST_SCHEMA {
        out.push("schema", format!("expected {MANIFEST_SCHEMA:?}, found {:?}", design.schema));
    }

    let mut names = BTreeSet::new();
    for (i, v) in design.variables.iter().enumerate() {
        let path = format!("variables[{i}]");
        if v.name.is_empty() || v.name.chars().any(char::is_whitespace) {
            out.push(format!("{path}.name"), format!("{:?} is not a valid identifier", v.name));
        }
        if !names.insert(v.name.as_str()) {
            out.push(format!("{path}.name"), format!("variable {:?} declared twice", v.name));
        }
        for problem in v.domain.definition_errors() {
            out.push(format!("{path}.domain"), problem);
        }
    }

    for v in &design.variables {
        let grid_path = format!("factor_grid.{}", v.name);
        let ctrl_path = format!("control_bindings.{}", v.name);
        match v.role {
            Role::Independent => match design.factor_grid.get(&v.name) {
                None => out.push(grid_path, "independent variable has no grid levels"),
                Some(levels) if levels.is_empty() => {
                    out.push(grid_path, "independent variable has no grid levels")
                }
                Some(levels) => {
                    let mut seen = Vec::new();
                    for (j, level) in levels.iter().enumerate() {
                        match v.domain.coerce(level) {
                            None => out.push(
                                format!("{grid_path}[{j}]"),
                                format!("level {level} is outside domain {}", v.domain),
                            ),
                            Some(c) if seen.contains(&c) => {
                                out.push(format!("{grid_path}[{j}]"), format!("level {level} repeated"))
                            }
                            Some(c) => seen.push(c),
                        }
                    }
                }
            },
            Role::Control => match design.control_bindings.get(&v.name) {
                None => out.push(ctrl_path, "control variable has no binding"),
                Some(value) if !v.domain.contains(value) => out.push(
                    ctrl_path,
                    format!("control variable {} bound to {value}, outside domain {}", v.name, v.domain),
                ),
                Some(_) => {}
            },
            Role::Dependent => {
                if design.factor_grid.contains_key(&v.name) {
                    out.push(grid_path, "dependent variables are observed, not swept");
                }
                if design.control_bindings.contains_key(&v.name) {
                    out.push(ctrl_path, "dependent variables are observed, not bound");
                }
            }
        }
    }
    for name in design.factor_grid.keys() {
        match design.variable(name) {
            None => out.push(format!("factor_grid.{name}"), "grid entry for undeclared variable"),
            Some(v) if v.role == Role::Control => {
                out.push(format!("factor_grid.{name}"), "only independent variables are swept")
            }
            _ => {}
        }
    }
    for name in design.control_bindings.keys() {
        match design.variable(name) {
            None => out.push(format!("control_bindings.{name}"), "binding for undeclared variable"),
            Some(v) if v.role == Role::Independent => {
                out.push(format!("control_bindings.{name}"), "only control variables are bound")
            }
            _ => {}
        }
    }

    if design.replications < 1 {
        out.push("replications", "must be at least 1");
    }
    if design.seed_count < 1 {
        out.push("seed_count", "must be at least 1");
    }
    if let Some(k) = design.grid_sample {
        let full = design.full_grid_size();
        if k < 1 || k as u128 > full {
            out.push("grid_sample", format!("must be between 1 and the grid size {full}"));
        }
    }
    if design.trial_cap.is_some_and(|c| c == 0) {
        out.push("trial_cap", "must be positive");
    }

    check_designations(design, &mut out);
    check_dataset_items(design, &mut out);
    check_hypotheses(design, &mut out);
    if let Some(exec) = &design.executor {
        if exec.command.is_empty() {
            out.push("executor.command", "empty command");
        }
        if exec.timeout.is_nan() || exec.timeout <= 0.0 {
            out.push("executor.timeout", "must be positive");
        }
        if exec.parallelism == Some(0) {
            out.push("executor.parallelism", "must be at least 1");
        }
    }

    out.0
}

fn check_designations(design: &ExperimentDesign, out: &mut Collector) {
    let d = &design.designations;
    let singles = [("designations.method", &d.method), ("designations.dataset", &d.dataset)];
    let many = d.hyperparameters.iter().map(|h| ("designations.hyperparameters", h));
    for (path, name) in singles.into_iter().filter_map(|(p, n)| n.as_ref().map(|n| (p, n))).chain(many) {
        match design.variable(name) {
            Some(v) if v.role == Role::Independent => {}
            _ => out.push(path, format!("{name:?} is not an independent variable")),
        }
    }
}

fn check_dataset_items(design: &ExperimentDesign, out: &mut Collector) {
    if design.dataset_items.is_empty() {
        return;
    }
    let Some(factor) = design.designations.dataset.as_deref() else {
        out.push("dataset_items", "requires designations.dataset");
        return;
    };
    let levels = design.factor_grid.get(factor).cloned().unwrap_or_default();
    for (level, &n) in &design.dataset_items {
        let path = format!("dataset_items.{level}");
        if !levels.iter().any(|l| l.as_label() == Some(level.as_str())) {
            out.push(path.clone(), format!("{level:?} is not a grid level of {factor}"));
        }
        if n == 0 {
            out.push(path.clone(), "item count must be positive");
        }
        if design.cv_folds as u64 > n {
            out.push(path, format!("{} folds exceed {n} items", design.cv_folds));
        }
    }
}

fn check_hypotheses(design: &ExperimentDesign, out: &mut Collector) {
    let mut ids = BTreeSet::new();
    let points = if design.full_grid_size() <= design.trial_cap() as u128 { Some(grid_points(design)) } else { None };
    for (i, h) in design.hypotheses.iter().enumerate() {
        let path = format!("hypotheses[{i}]");
        if h.id.is_empty() {
            out.push(format!("{path}.id"), "empty hypothesis id");
        } else if !ids.insert(h.id.as_str()) {
            out.push(format!("{path}.id"), format!("hypothesis id {:?} repeated", h.id));
        }
        match design.variable(&h.metric) {
            Some(v) if v.role == Role::Dependent => {}
            _ => out.push(format!("{path}.metric"), format!("{:?} is not a dependent variable", h.metric)),
        }
        if !(h.alpha > 0.0 && h.alpha < 1.0) {
            out.push(format!("{path}.alpha"), "alpha out of (0,1)");
        }
        for (key, sel) in [("groupA", &h.group_a), ("groupB", &h.group_b)] {
            if sel.is_empty() {
                out.push(format!("{path}.{key}"), "empty group selector");
            }
            for (var, value) in &sel.0 {
                let level_ok = design.variable(var).filter(|v| v.role == Role::Independent).and_then(|v| {
                    let c = v.domain.coerce(value)?;
                    design.factor_grid.get(var)?.iter().any(|l| v.domain.coerce(l).as_ref() == Some(&c)).then_some(())
                });
                if level_ok.is_none() {
                    out.push(format!("{path}.{key}.{var}"), format!("{value} is not a grid level of an independent variable {var:?}"));
                }
            }
        }
        if !h.group_a.disjoint_from(&h.group_b) {
            out.push(format!("{path}.groupB"), "groups A and B are not disjoint");
        }
        if let Some(points) = &points {
            for (key, sel) in [("groupA", &h.group_a), ("groupB", &h.group_b)] {
                let sel = sel.normalized(design);
                if !sel.is_empty() && !points.iter().any(|p| sel.matches(&p.bindings)) {
                    out.push(format!("{path}.{key}"), "selects no grid point");
                }
            }
        }
    }
}
