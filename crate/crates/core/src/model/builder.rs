use std::collections::BTreeMap;

use super::{
    Attestations, Designations, ExperimentDesign, Hypothesis, Role, Value, VariableDomain, VariableSpec,
    MANIFEST_SCHEMA,
};

/// Fluent construction of an [`ExperimentDesign`] in code.
///
/// ```
/// use veritas::model::{DesignBuilder, GroupSelector, Hypothesis, VariableDomain};
///
/// let design = DesignBuilder::new("toy")
///     .independent("method", "compared model", VariableDomain::categorical(["a", "b"]), ["a", "b"])
///     .dependent("score", "validation score", VariableDomain::real())
///     .seeds(3)
///     .hypothesis(Hypothesis::compare(
///         "H1",
///         "score",
///         GroupSelector::single("method", "a"),
///         GroupSelector::single("method", "b"),
///     ))
///     .build();
/// assert_eq!(design.trial_count(), 6);
/// ```
#[derive(Debug, Clone)]
pub struct DesignBuilder {
    design: ExperimentDesign,
}

impl DesignBuilder {
    pub fn new(title: &str) -> Self {
        DesignBuilder {
            design: ExperimentDesign {
                schema: MANIFEST_SCHEMA.to_string(),
                title: title.to_string(),
                variables: Vec::new(),
                factor_grid: BTreeMap::new(),
                control_bindings: BTreeMap::new(),
                replications: 1,
                master_seed: 0,
                seed_count: 1,
                cv_folds: 0,
                hypotheses: Vec::new(),
                attestations: Attestations::default(),
                designations: Designations::default(),
                grid_sample: None,
                trial_cap: None,
                dataset_items: BTreeMap::new(),
                executor: None,
            },
        }
    }

    pub fn independent<I, V>(mut self, name: &str, description: &str, domain: VariableDomain, levels: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<Value>,
    {
        self.design.variables.push(VariableSpec::new(name, Role::Independent, domain, description));
        self.design.factor_grid.insert(name.to_string(), levels.into_iter().map(Into::into).collect());
        self
    }

    pub fn control(mut self, name: &str, description: &str, domain: VariableDomain, value: impl Into<Value>) -> Self {
        self.design.variables.push(VariableSpec::new(name, Role::Control, domain, description));
        self.design.control_bindings.insert(name.to_string(), value.into());
        self
    }

    pub fn dependent(mut self, name: &str, description: &str, domain: VariableDomain) -> Self {
        self.design.variables.push(VariableSpec::new(name, Role::Dependent, domain, description));
        self
    }

    pub fn replications(mut self, r: u32) -> Self {
        self.design.replications = r;
        self
    }

    pub fn seeds(mut self, s: u32) -> Self {
        self.design.seed_count = s;
        self
    }

    pub fn folds(mut self, k: u32) -> Self {
        self.design.cv_folds = k;
        self
    }

    pub fn master_seed(mut self, seed: u64) -> Self {
        self.design.master_seed = seed;
        self
    }

    pub fn hypothesis(mut self, h: Hypothesis) -> Self {
        self.design.hypotheses.push(h);
        self
    }

    pub fn method_factor(mut self, name: &str) -> Self {
        self.design.designations.method = Some(name.to_string());
        self
    }

    pub fn dataset_factor(mut self, name: &str) -> Self {
        self.design.designations.dataset = Some(name.to_string());
        self
    }

    pub fn hyperparameter(mut self, name: &str) -> Self {
        self.design.designations.hyperparameters.push(name.to_string());
        self
    }

    pub fn dataset_items(mut self, level: &str, n: u64) -> Self {
        self.design.dataset_items.insert(level.to_string(), n);
        self
    }

    pub fn grid_sample(mut self, k: u64) -> Self {
        self.design.grid_sample = Some(k);
        self
    }

    pub fn trial_cap(mut self, cap: u64) -> Self {
        self.design.trial_cap = Some(cap);
        self
    }

    pub fn attestations(mut self, a: Attestations) -> Self {
        self.design.attestations = a;
        self
    }

    pub fn build(self) -> ExperimentDesign {
        self.design
    }
}
