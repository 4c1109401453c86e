use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty list of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sample is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("sample value {} at position {i} is not finite", values[i])));
        }
        Ok(Sample(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Sample::new(v)
    }
}

impl From<Sample> for Vec<f64> {
    fn from(s: Sample) -> Self {
        s.0
    }
}

/// Two index-aligned samples. `keys[i]` names the pairing unit shared by
/// `a[i]` and `b[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSamples {
    a: Sample,
    b: Sample,
    keys: Vec<String>,
}

impl PairedSamples {
    /// Pairs by position; keys are the indices.
    pub fn new(a: Sample, b: Sample) -> Result<Self> {
        let keys = (0..a.len()).map(|i| i.to_string()).collect();
        Self::with_keys(a, b, keys)
    }

    pub fn with_keys(a: Sample, b: Sample, keys: Vec<String>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(format!("paired samples differ in length ({} vs {})", a.len(), b.len())));
        }
        if a.len() < 2 {
            return Err(Error::InvalidArgument("paired samples need at least 2 pairs".into()));
        }
        if keys.len() != a.len() {
            return Err(Error::InvalidArgument("one alignment key per pair is required".into()));
        }
        Ok(PairedSamples { a, b, keys })
    }

    pub fn from_values(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(Sample::new(a)?, Sample::new(b)?)
    }

    pub fn a(&self) -> &Sample {
        &self.a
    }

    pub fn b(&self) -> &Sample {
        &self.b
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a[i] - b[i]`.
    pub fn differences(&self) -> Vec<f64> {
        self.a.values().iter().zip(self.b.values()).map(|(x, y)| x - y).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PairedT,
    WelchT,
    WilcoxonSignedRank,
    MannWhitneyU,
    KsTwoSample,
    ShapiroWilk,
    Levene,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PairedT => "paired-t",
            Method::WelchT => "welch-t",
            Method::WilcoxonSignedRank => "wilcoxon-signed-rank",
            Method::MannWhitneyU => "mann-whitney-u",
            Method::KsTwoSample => "ks-two-sample",
            Method::ShapiroWilk => "shapiro-wilk",
            Method::Levene => "levene",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Requested p-value computation for the rank tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Auto,
    Exact,
    Approx,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::Approx),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?} (auto, exact, approx)"))),
        }
    }
}

/// How a reported p-value was obtained.
///
/// `Exact` and `NormalApproximation` apply to the rank tests. The KS
/// fallback uses the Kolmogorov limit (`Asymptotic`, also used by the
/// Royston approximation of Shapiro–Wilk), and the t and F tests read
/// their reference distribution directly (`Parametric`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PMode {
    Exact,
    NormalApproximation,
    Asymptotic,
    Parametric,
}

impl fmt::Display for PMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PMode::Exact => "exact",
            PMode::NormalApproximation => "normal-approximation",
            PMode::Asymptotic => "asymptotic",
            PMode::Parametric => "parametric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectKind {
    CohensD,
    RankBiserial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub kind: EffectKind,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub lower: f64,
    pub center: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn half_width(&self) -> f64 {
        self.upper - self.center
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistic: f64,
    pub p_value: f64,
    /// One entry for paired and one-sample tests, `[n_a, n_b]` otherwise.
    pub n: Vec<usize>,
    pub mode: PMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_size: Option<EffectSize>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl TestResult {
    pub(crate) fn new(method: Method, statistic: f64, p_value: f64, n: Vec<usize>, mode: PMode) -> Self {
        TestResult { method, statistic, p_value: p_value.clamp(0.0, 1.0), n, mode, df: None, effect_size: None, warnings: Vec::new() }
    }
}

/// Combine one-sided tails into the p-value for `direction`.
pub(crate) fn directed_p(direction: crate::model::Direction, lower: f64, upper: f64) -> f64 {
    use crate::model::Direction;
    match direction {
        Direction::Greater => upper,
        Direction::Less => lower,
        Direction::TwoSided => (2.0 * lower.min(upper)).min(1.0),
    }
    .clamp(0.0, 1.0)
}
