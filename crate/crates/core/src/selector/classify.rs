use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{levene, shapiro_wilk, Method, Sample};

/// Significance level of the normality and variance pre-tests.
pub const ALPHA_PRE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    Normal,
    NotNormal,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variances {
    Equal,
    Unequal,
    Any,
}

/// A selection-table row key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classification {
    pub distribution: Distribution,
    pub variances: Variances,
}

impl Classification {
    pub const NORMAL_EQUAL: Self = Self { distribution: Distribution::Normal, variances: Variances::Equal };
    pub const NORMAL_UNEQUAL: Self = Self { distribution: Distribution::Normal, variances: Variances::Unequal };
    pub const NOT_NORMAL: Self = Self { distribution: Distribution::NotNormal, variances: Variances::Any };
    pub const MIXED: Self = Self { distribution: Distribution::Mixed, variances: Variances::Any };
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.distribution {
            Distribution::Normal => "normal",
            Distribution::NotNormal => "not-normal",
            Distribution::Mixed => "mixed",
        };
        let v = match self.variances {
            Variances::Equal => "equal",
            Variances::Unequal => "unequal",
            Variances::Any => "any",
        };
        write!(f, "{d}/{v}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityCheck {
    pub group: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    pub normal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceCheck {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Classification with the pre-test evidence behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Classified {
    pub classification: Classification,
    pub normality: [NormalityCheck; 2],
    pub variance: Option<VarianceCheck>,
}

fn normality(group: &str, s: &Sample, alpha_pre: f64) -> Result<NormalityCheck> {
    match shapiro_wilk(s) {
        Ok(r) => Ok(NormalityCheck {
            group: group.into(),
            n: s.len(),
            w: Some(r.statistic),
            p_value: Some(r.p_value),
            normal: r.p_value > alpha_pre,
            note: None,
        }),
        Err(Error::DegenerateSample(_)) => Ok(NormalityCheck {
            group: group.into(),
            n: s.len(),
            w: None,
            p_value: None,
            normal: false,
            note: Some("constant sample, treated as not normal".into()),
        }),
        Err(e) => Err(e),
    }
}

/// Shapiro–Wilk on each group, then (normal branch only) Brown–Forsythe
/// Levene. A p-value strictly above `alpha_pre` counts as normal / equal.
pub fn classify(a: &Sample, b: &Sample, alpha_pre: f64) -> Result<Classified> {
    for (name, s) in [("A", a), ("B", b)] {
        if s.len() < 3 {
            return Err(Error::InsufficientData(format!("group {name} has {} value(s); classification needs 3", s.len())));
        }
    }
    let na = normality("A", a, alpha_pre)?;
    let nb = normality("B", b, alpha_pre)?;
    let (classification, variance) = match (na.normal, nb.normal) {
        (true, true) => {
            let check = match levene(a, b) {
                Ok(r) => VarianceCheck { statistic: Some(r.statistic), p_value: Some(r.p_value), equal: r.p_value > alpha_pre, note: None },
                Err(Error::DegenerateSample(msg)) => VarianceCheck {
                    statistic: None,
                    p_value: None,
                    equal: false,
                    note: Some(format!("{msg}; treated as unequal")),
                },
                Err(e) => return Err(e),
            };
            let c = if check.equal { Classification::NORMAL_EQUAL } else { Classification::NORMAL_UNEQUAL };
            (c, Some(check))
        }
        (false, false) => (Classification::NOT_NORMAL, None),
        _ => (Classification::MIXED, None),
    };
    Ok(Classified { classification, normality: [na, nb], variance })
}

/// The ordered test list for a classification. The first test
/// decides; a second one is advisory.
pub fn select_test(c: Classification) -> Vec<Method> {
    match c.distribution {
        Distribution::Normal => match c.variances {
            Variances::Unequal => vec![Method::WelchT],
            _ => vec![Method::PairedT],
        },
        Distribution::NotNormal => vec![Method::WilcoxonSignedRank],
        Distribution::Mixed => vec![Method::MannWhitneyU, Method::KsTwoSample],
    }
}
