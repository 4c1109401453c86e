use serde::{Deserialize, Serialize};

use super::classify::{classify, select_test, Classification, Classified, NormalityCheck, VarianceCheck, ALPHA_PRE};
use super::units::{group_units, UnitKey};
use crate::error::{Error, Result};
use crate::model::{Direction, ExperimentDesign, Hypothesis, Pairing};
use crate::orchestrator::RunRecord;
use crate::stats::{
    cohens_d, cohens_d_paired, confidence_interval, holm_adjust, ks_two_sample, mann_whitney_u, paired_t, welch_t,
    wilcoxon_signed_rank, ConfidenceInterval, EffectSize, Method, Mode, PMode, PairedSamples, Sample, TestResult,
};

/// Fewest units per group the normality pre-test accepts. Below this the
/// selector skips classification and takes the nonparametric branch.
pub const MIN_UNITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    #[serde(rename = "reject-H0")]
    RejectH0,
    #[serde(rename = "fail-to-reject-H0")]
    FailToRejectH0,
}

impl Decision {
    /// Strict: `p == alpha` does not reject.
    pub fn from_p(p: f64, alpha: f64) -> Self {
        if p < alpha {
            Decision::RejectH0
        } else {
            Decision::FailToRejectH0
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::RejectH0 => "reject-H0",
            Decision::FailToRejectH0 => "fail-to-reject-H0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub alpha_pre: f64,
    pub normality: Vec<NormalityCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<VarianceCheck>,
    pub classification: Classification,
    /// The selection row's tests.
    pub chosen_tests: Vec<Method>,
    /// Tests actually run, after adapting to the hypothesis' pairing.
    pub executed_tests: Vec<Method>,
    pub rationale: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub hypothesis_id: String,
    pub metric: String,
    pub pairing: Pairing,
    pub direction: Direction,
    /// Analysis units per group after aggregation.
    pub n_units: [usize; 2],
    pub primary: TestResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<TestResult>,
    pub alpha: f64,
    /// The p-value compared with `alpha`: the primary p, or its adjusted
    /// value when a multiplicity correction is applied.
    pub p_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjustment: Option<String>,
    pub decision: Decision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_size: Option<EffectSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_a: Option<ConfidenceInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_b: Option<ConfidenceInterval>,
    pub trace: SelectionTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    /// Replaces every hypothesis' own alpha when set.
    pub alpha: Option<f64>,
    pub ci_level: f64,
    pub mode: Mode,
    /// Holm–Bonferroni across the design's hypotheses.
    pub holm: bool,
    /// Average folds into one unit as well as replications.
    pub aggregate_folds: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { alpha: None, ci_level: 0.95, mode: Mode::Auto, holm: false, aggregate_folds: false }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {a}")));
            }
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::InvalidArgument(format!("CI level must lie in (0,1), got {}", self.ci_level)));
        }
        Ok(())
    }
}

fn fmt_p(p: Option<f64>) -> String {
    p.map_or_else(|| "n/a".into(), |p| format!("{p:.4}"))
}

/// Run `method`; a degenerate sample yields a neutral result (statistic 0,
/// p = 1) carrying the reason as a warning.
fn run_test(
    method: Method,
    a: &Sample,
    b: &Sample,
    paired: Option<&PairedSamples>,
    direction: Direction,
    mode: Mode,
) -> Result<TestResult> {
    let result = match method {
        Method::PairedT => paired_t(paired.expect("paired-t needs pairs"), direction),
        Method::WelchT => welch_t(a, b, direction),
        Method::WilcoxonSignedRank => wilcoxon_signed_rank(paired.expect("wilcoxon needs pairs"), direction, mode),
        Method::MannWhitneyU => mann_whitney_u(a, b, direction, mode),
        Method::KsTwoSample => ks_two_sample(a, b, mode),
        other => return Err(Error::InternalInconsistency(format!("{other} is not a comparison test"))),
    };
    match result {
        Err(Error::DegenerateSample(msg)) => {
            let pmode = match method {
                Method::PairedT | Method::WelchT => PMode::Parametric,
                _ => PMode::Exact,
            };
            let n = match paired {
                Some(p) if matches!(method, Method::PairedT | Method::WilcoxonSignedRank) => vec![p.len()],
                _ => vec![a.len(), b.len()],
            };
            let mut r = TestResult::new(method, 0.0, 1.0, n, pmode);
            r.warnings.push(format!("degenerate sample: {msg}; H0 not rejected"));
            Ok(r)
        }
        other => other,
    }
}

/// Extract, classify, select and test one hypothesis.
pub fn evaluate_hypothesis(
    design: &ExperimentDesign,
    h: &Hypothesis,
    records: &[RunRecord],
    options: &AnalysisOptions,
) -> Result<Verdict> {
    options.validate()?;
    let units = group_units(design, h, records, options.aggregate_folds)?;
    for (name, count, n) in [("A", units.records_a, units.a.len()), ("B", units.records_b, units.b.len())] {
        if count == 0 {
            return Err(Error::InsufficientData(format!("hypothesis {}: group {name} has no ok records", h.id)));
        }
        if h.pairing == Pairing::Paired && n < 2 {
            return Err(Error::InsufficientData(format!(
                "hypothesis {}: group {name} has {n} analysis unit(s), a paired test needs 2",
                h.id
            )));
        }
    }
    let mut rationale = vec![format!(
        "{} and {} ok records averaged over replications{} into {} and {} units",
        units.records_a,
        units.records_b,
        if options.aggregate_folds { " and folds" } else { "" },
        units.a.len(),
        units.b.len()
    )];

    let paired = if h.pairing == Pairing::Paired {
        let mut missing: Vec<String> = Vec::new();
        missing.extend(units.a.keys().filter(|k| !units.b.contains_key(*k)).map(|k| format!("{k} (no B)")));
        missing.extend(units.b.keys().filter(|k| !units.a.contains_key(*k)).map(|k| format!("{k} (no A)")));
        if !missing.is_empty() {
            return Err(Error::Alignment { hypothesis: h.id.clone(), missing });
        }
        let keys: Vec<&UnitKey> = units.a.keys().collect();
        let a: Vec<f64> = keys.iter().map(|k| units.a[*k]).collect();
        let b: Vec<f64> = keys.iter().map(|k| units.b[*k]).collect();
        Some(PairedSamples::with_keys(Sample::new(a)?, Sample::new(b)?, keys.iter().map(|k| k.to_string()).collect())?)
    } else {
        None
    };
    let (a, b) = match &paired {
        Some(p) => (p.a().clone(), p.b().clone()),
        None => (Sample::new(units.a.values().copied().collect())?, Sample::new(units.b.values().copied().collect())?),
    };

    let mut warnings = Vec::new();
    let classified = match classify(&a, &b, ALPHA_PRE) {
        Err(Error::InsufficientData(msg)) => {
            let w = format!("{msg}; defaulting to the nonparametric branch");
            rationale.push(w.clone());
            warnings.push(w);
            let check = |group: &str, n: usize| NormalityCheck {
                group: group.into(),
                n,
                w: None,
                p_value: None,
                normal: false,
                note: Some(format!("Shapiro-Wilk needs {MIN_UNITS} values, treated as not normal")),
            };
            Classified {
                classification: Classification::NOT_NORMAL,
                normality: [check("A", a.len()), check("B", b.len())],
                variance: None,
            }
        }
        other => other?,
    };
    let c = classified.classification;
    let [na, nb] = &classified.normality;
    rationale.push(format!(
        "Shapiro-Wilk p(A) = {}, p(B) = {} against alpha_pre {ALPHA_PRE}: {}",
        fmt_p(na.p_value),
        fmt_p(nb.p_value),
        match c.distribution {
            super::Distribution::Normal => "both normal",
            super::Distribution::NotNormal => "neither normal",
            super::Distribution::Mixed => "exactly one normal",
        }
    ));
    for check in [na, nb] {
        if let Some(note) = &check.note {
            rationale.push(format!("group {}: {note}", check.group));
        }
    }
    if let Some(v) = &classified.variance {
        rationale.push(format!(
            "Brown-Forsythe Levene p = {}: variances {}",
            fmt_p(v.p_value),
            if v.equal { "equal" } else { "unequal" }
        ));
        if let Some(note) = &v.note {
            rationale.push(format!("Levene: {note}"));
        }
    }
    let chosen = select_test(c);
    rationale.push(format!(
        "selection row ({c}) gives [{}]",
        chosen.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ")
    ));

    let executed: Vec<Method> = chosen
        .iter()
        .map(|&m| match (m, paired.is_some()) {
            (Method::PairedT, false) => {
                rationale.push("groups are unpaired: Welch's t replaces the paired t-test".into());
                Method::WelchT
            }
            (Method::WilcoxonSignedRank, false) => {
                rationale.push("groups are unpaired: Mann-Whitney U replaces Wilcoxon signed-rank, which needs pairs".into());
                Method::MannWhitneyU
            }
            (Method::WelchT, true) => {
                rationale.push(
                    "the row calls for a paired t-test with Welch's correction; Welch's two-sample t is run on the group values, ignoring the pairing"
                        .into(),
                );
                Method::WelchT
            }
            (m, _) => m,
        })
        .collect();
    if executed.len() > 1 {
        rationale.push(format!("{} decides; {} is advisory", executed[0], executed[1]));
        if h.direction != Direction::TwoSided && executed.contains(&Method::KsTwoSample) {
            rationale.push("the KS test is always two-sided".into());
        }
    }

    let mut results = Vec::new();
    for &m in &executed {
        results.push(run_test(m, &a, &b, paired.as_ref(), h.direction, options.mode)?);
    }
    let mut primary = results.remove(0);
    primary.warnings.extend(warnings);
    let secondary = results.pop();

    let effect_size = match primary.method {
        Method::PairedT => paired.as_ref().and_then(|p| cohens_d_paired(p).ok()),
        Method::WelchT => cohens_d(&a, &b).ok(),
        _ => primary.effect_size,
    };
    let alpha = options.alpha.unwrap_or(h.alpha);
    let p = primary.p_value;
    Ok(Verdict {
        hypothesis_id: h.id.clone(),
        metric: h.metric.clone(),
        pairing: h.pairing,
        direction: h.direction,
        n_units: [a.len(), b.len()],
        decision: Decision::from_p(p, alpha),
        p_value: p,
        adjustment: None,
        alpha,
        effect_size,
        ci_a: confidence_interval(&a, options.ci_level).ok(),
        ci_b: confidence_interval(&b, options.ci_level).ok(),
        primary,
        secondary,
        trace: SelectionTrace {
            alpha_pre: ALPHA_PRE,
            normality: classified.normality.to_vec(),
            variance: classified.variance,
            classification: c,
            chosen_tests: chosen,
            executed_tests: executed,
            rationale,
        },
    })
}

/// Evaluate every hypothesis of the design, in declaration order.
pub fn evaluate_design(design: &ExperimentDesign, records: &[RunRecord], options: &AnalysisOptions) -> Result<Vec<Verdict>> {
    let mut verdicts = design
        .hypotheses
        .iter()
        .map(|h| evaluate_hypothesis(design, h, records, options))
        .collect::<Result<Vec<_>>>()?;
    if options.holm && !verdicts.is_empty() {
        let raw: Vec<f64> = verdicts.iter().map(|v| v.primary.p_value).collect();
        for (v, p) in verdicts.iter_mut().zip(holm_adjust(&raw)) {
            v.p_value = p;
            v.adjustment = Some("holm".into());
            v.decision = Decision::from_p(p, v.alpha);
            v.trace.rationale.push(format!("Holm-Bonferroni across {} hypotheses: adjusted p = {p:.4}", raw.len()));
        }
    }
    Ok(verdicts)
}
