use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExperimentDesign, Value};

/// Conjunction of `variable = value` conditions over a trial's independent
/// bindings. `{method = "candidate"}` selects every trial of that method.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSelector(pub BTreeMap<String, Value>);

impl GroupSelector {
    pub fn single(variable: &str, value: impl Into<Value>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(variable.to_string(), value.into());
        GroupSelector(m)
    }

    pub fn matches(&self, bindings: &BTreeMap<String, Value>) -> bool {
        self.0.iter().all(|(k, v)| bindings.get(k).is_some_and(|w| same_level(v, w)))
    }

    /// Values coerced to their variable's domain, so `1` selects the real
    /// level `1.0`. Unknown variables and non-members are kept verbatim.
    pub fn normalized(&self, design: &ExperimentDesign) -> GroupSelector {
        GroupSelector(
            self.0
                .iter()
                .map(|(k, v)| {
                    let v = design.variable(k).and_then(|spec| spec.domain.coerce(v)).unwrap_or_else(|| v.clone());
                    (k.clone(), v)
                })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no assignment can satisfy both selectors: some variable is
    /// constrained by both to different values.
    pub fn disjoint_from(&self, other: &GroupSelector) -> bool {
        self.0.iter().any(|(k, v)| other.0.get(k).is_some_and(|w| !same_level(v, w)))
    }
}

fn same_level(a: &Value, b: &Value) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => x == y,
        _ => a == b,
    }
}

impl fmt::Display for GroupSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" & "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    Paired,
    Unpaired,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Paired => "paired",
            Pairing::Unpaired => "unpaired",
        })
    }
}

/// Alternative hypothesis direction, always read as "group A relative to group B".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    #[default]
    TwoSided,
    Greater,
    Less,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::TwoSided => "two-sided",
            Direction::Greater => "greater",
            Direction::Less => "less",
        })
    }
}

/// A falsifiable H0/Ha pair over one dependent variable.
///
/// H0 states no difference in `metric` between the trials selected by
/// `groupA` and `groupB`; Ha states a difference in `direction`. H0 is
/// rejected when the selected test's p-value is strictly below `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: String,
    pub metric: String,
    #[serde(rename = "groupA")]
    pub group_a: GroupSelector,
    #[serde(rename = "groupB")]
    pub group_b: GroupSelector,
    pub pairing: Pairing,
    #[serde(default)]
    pub direction: Direction,
    pub alpha: f64,
    #[serde(default)]
    pub statement_null: String,
    #[serde(default)]
    pub statement_alt: String,
}

impl Hypothesis {
    /// Paired two-sided comparison at alpha 0.05 with generated H0/Ha text.
    pub fn compare(id: &str, metric: &str, group_a: GroupSelector, group_b: GroupSelector) -> Self {
        let mut h = Hypothesis {
            id: id.to_string(),
            metric: metric.to_string(),
            group_a,
            group_b,
            pairing: Pairing::Paired,
            direction: Direction::TwoSided,
            alpha: 0.05,
            statement_null: String::new(),
            statement_alt: String::new(),
        };
        h.restate();
        h
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self.restate();
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_pairing(mut self, pairing: Pairing) -> Self {
        self.pairing = pairing;
        self
    }

    fn restate(&mut self) {
        let (a, b, m) = (&self.group_a, &self.group_b, &self.metric);
        self.statement_null = format!("{m} does not differ between {a} and {b}");
        self.statement_alt = match self.direction {
            Direction::TwoSided => format!("{m} differs between {a} and {b}"),
            Direction::Greater => format!("{m} is greater for {a} than for {b}"),
            Direction::Less => format!("{m} is less for {a} than for {b}"),
        };
    }

    /// Variables the two selectors condition on. Pair keys are formed from
    /// every other coordinate.
    pub fn factor_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> =
            self.group_a.0.keys().chain(self.group_b.0.keys()).map(String::as_str).collect();
        names.sort_unstable();
        names.dedup();
        names
    }
}
