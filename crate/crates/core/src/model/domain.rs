use std::fmt;

use serde::{Deserialize, Serialize};

/// A single bound or observed value of an experiment variable.
///
/// Serialized untagged: integers as JSON/TOML integers, reals as floats,
/// categorical labels as strings. Reals always carry a decimal point or
/// exponent in serialized form, which keeps the integer/real split lossless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Integer(i64),
    Real(f64),
    Label(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Integer(i) => Some(i as f64),
            Value::Real(r) => Some(r),
            Value::Label(_) => None,
        }
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            Value::Label(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r:?}"),
            Value::Label(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Integer(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Label(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Independent,
    Control,
    Dependent,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Independent => "independent",
            Role::Control => "control",
            Role::Dependent => "dependent",
        })
    }
}

/// Value domain of a variable: real line, integers, or a finite label set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VariableDomain {
    Real {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<f64>,
    },
    Integer {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<i64>,
    },
    Categorical { levels: Vec<String> },
}

impl VariableDomain {
    pub fn real() -> Self {
        VariableDomain::Real { lower: None, upper: None }
    }

    pub fn real_bounded(lower: f64, upper: f64) -> Self {
        VariableDomain::Real { lower: Some(lower), upper: Some(upper) }
    }

    pub fn integer() -> Self {
        VariableDomain::Integer { lower: None, upper: None }
    }

    pub fn categorical<I, S>(levels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VariableDomain::Categorical { levels: levels.into_iter().map(Into::into).collect() }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self, VariableDomain::Categorical { .. })
    }

    /// Problems with the domain definition itself.
    pub fn definition_errors(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            VariableDomain::Real { lower, upper } => {
                for (name, b) in [("lower", lower), ("upper", upper)] {
                    if let Some(b) = b {
                        if !b.is_finite() {
                            out.push(format!("{name} bound is not finite"));
                        }
                    }
                }
                if let (Some(l), Some(u)) = (lower, upper) {
                    if l > u {
                        out.push(format!("lower bound {l} exceeds upper bound {u}"));
                    }
                }
            }
            VariableDomain::Integer { lower, upper } => {
                if let (Some(l), Some(u)) = (lower, upper) {
                    if l > u {
                        out.push(format!("lower bound {l} exceeds upper bound {u}"));
                    }
                }
            }
            VariableDomain::Categorical { levels } => {
                if levels.is_empty() {
                    out.push("categorical domain has no levels".to_string());
                }
                for (i, level) in levels.iter().enumerate() {
                    if level.is_empty() {
                        out.push(format!("level {i} is empty"));
                    }
                    if levels[..i].contains(level) {
                        out.push(format!("level {level:?} is duplicated"));
                    }
                }
            }
        }
        out
    }

    /// Maps `value` onto this domain's canonical representation, or `None`
    /// when it is not a member. Integers are accepted for real domains and
    /// widened; reals are never narrowed to integers.
    pub fn coerce(&self, value: &Value) -> Option<Value> {
        match (self, value) {
            (VariableDomain::Real { lower, upper }, Value::Real(_) | Value::Integer(_)) => {
                let x = value.as_f64()?;
                let inside = x.is_finite()
                    && lower.is_none_or(|l| x >= l)
                    && upper.is_none_or(|u| x <= u);
                inside.then_some(Value::Real(x))
            }
            (VariableDomain::Integer { lower, upper }, Value::Integer(i)) => {
                let inside = lower.is_none_or(|l| *i >= l) && upper.is_none_or(|u| *i <= u);
                inside.then_some(Value::Integer(*i))
            }
            (VariableDomain::Categorical { levels }, Value::Label(s)) => {
                levels.contains(s).then(|| value.clone())
            }
            _ => None,
        }
    }

    pub fn contains(&self, value: &Value) -> bool {
        self.coerce(value).is_some()
    }
}

impl fmt::Display for VariableDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn bound<T: fmt::Display>(b: &Option<T>, inf: &str) -> String {
            b.as_ref().map_or_else(|| inf.to_string(), |b| b.to_string())
        }
        match self {
            VariableDomain::Real { lower, upper } => {
                write!(f, "real [{}, {}]", bound(lower, "-inf"), bound(upper, "inf"))
            }
            VariableDomain::Integer { lower, upper } => {
                write!(f, "integer [{}, {}]", bound(lower, "-inf"), bound(upper, "inf"))
            }
            VariableDomain::Categorical { levels } => write!(f, "categorical {{{}}}", levels.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub role: Role,
    pub domain: VariableDomain,
    #[serde(default)]
    pub description: String,
}

impl VariableSpec {
    pub fn new(name: &str, role: Role, domain: VariableDomain, description: &str) -> Self {
        VariableSpec { name: name.to_string(), role, domain, description: description.to_string() }
    }
}
