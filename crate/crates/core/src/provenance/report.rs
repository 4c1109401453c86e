//! Analysis report, schema `veritas_report_v1`.
//!
//! The JSON document is the source of truth; [`render_text`] prints the
//! same numbers at 6 significant digits (`%g` style). `generated_at` and
//! `total_wall_time` are the only fields that differ between replicated
//! runs and are masked by [`Report::canonical`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::archive::RunArchive;
use crate::error::{Error, Result};
use crate::model::ExperimentDesign;
use crate::orchestrator::EnvironmentInfo;
use crate::selector::{group_values, AnalysisOptions, Verdict};
use crate::stats::{confidence_interval, describe, ConfidenceInterval, Sample};

pub const REPORT_SCHEMA: &str = "veritas_report_v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSummary {
    pub environment: EnvironmentInfo,
    pub records: usize,
}

/// Descriptives over every ok record a hypothesis group selects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub hypothesis_id: String,
    pub group: String,
    pub selector: String,
    pub metric: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci: Option<ConfidenceInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub id: String,
    pub statement_null: String,
    pub statement_alt: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub harness_version: String,
    pub generated_at: String,
    pub title: String,
    pub design_fingerprint: String,
    pub ci_level: f64,
    pub options: AnalysisOptions,
    pub status_counts: BTreeMap<String, usize>,
    /// Seconds, summed over all records.
    pub total_wall_time: f64,
    pub environments: Vec<EnvironmentSummary>,
    pub groups: Vec<GroupSummary>,
    pub hypotheses: Vec<HypothesisReport>,
}

impl Report {
    pub fn canonical(&self) -> Report {
        Report { generated_at: String::new(), total_wall_time: 0.0, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Report> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let report: Report = serde_json::from_str(&text)?;
        if report.schema != REPORT_SCHEMA {
            return Err(Error::InvalidArgument(format!("{} has schema {:?}, expected {REPORT_SCHEMA}", path.display(), report.schema)));
        }
        Ok(report)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn verdict(&self, hypothesis_id: &str) -> Option<&Verdict> {
        self.hypotheses.iter().find(|h| h.id == hypothesis_id).map(|h| &h.verdict)
    }
}

/// Group summary for one selector of `h`, recomputable from the records.
pub fn summarize_group(
    design: &ExperimentDesign,
    h: &crate::model::Hypothesis,
    group_b: bool,
    archive: &RunArchive,
    ci_level: f64,
) -> Result<GroupSummary> {
    let values: Vec<f64> = group_values(design, h, group_b, &archive.records)?.into_iter().map(|(_, x)| x).collect();
    let (mean, sd, ci) = match Sample::new(values.clone()) {
        Ok(s) => {
            let d = describe(&s);
            (Some(d.mean), d.sd, confidence_interval(&s, ci_level).ok())
        }
        Err(_) => (None, None, None),
    };
    Ok(GroupSummary {
        hypothesis_id: h.id.clone(),
        group: if group_b { "B" } else { "A" }.into(),
        selector: if group_b { &h.group_b } else { &h.group_a }.to_string(),
        metric: h.metric.clone(),
        n: values.len(),
        mean,
        sd,
        ci,
    })
}

pub fn generate_report(
    design: &ExperimentDesign,
    archive: &RunArchive,
    verdicts: &[Verdict],
    options: &AnalysisOptions,
) -> Result<Report> {
    options.validate()?;
    for v in verdicts {
        if design.hypothesis(&v.hypothesis_id).is_none() {
            return Err(Error::InternalInconsistency(format!("verdict for unknown hypothesis {:?}", v.hypothesis_id)));
        }
    }
    let mut environments: BTreeMap<&EnvironmentInfo, usize> = BTreeMap::new();
    for r in &archive.records {
        *environments.entry(&r.environment).or_default() += 1;
    }
    let mut groups = Vec::new();
    let mut hypotheses = Vec::new();
    for h in &design.hypotheses {
        groups.push(summarize_group(design, h, false, archive, options.ci_level)?);
        groups.push(summarize_group(design, h, true, archive, options.ci_level)?);
        if let Some(v) = verdicts.iter().find(|v| v.hypothesis_id == h.id) {
            hypotheses.push(HypothesisReport {
                id: h.id.clone(),
                statement_null: h.statement_null.clone(),
                statement_alt: h.statement_alt.clone(),
                verdict: v.clone(),
            });
        }
    }
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        harness_version: crate::HARNESS_VERSION.into(),
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        title: design.title.clone(),
        design_fingerprint: design.fingerprint(),
        ci_level: options.ci_level,
        options: *options,
        status_counts: archive.status_counts().into_iter().map(|(s, n)| (s.to_string(), n)).collect(),
        total_wall_time: archive.records.iter().map(|r| r.wall_time).sum(),
        environments: environments.into_iter().map(|(e, n)| EnvironmentSummary { environment: e.clone(), records: n }).collect(),
        groups,
        hypotheses,
    })
}

/// `%g` with 6 significant digits: fixed notation for exponents -4..=5,
/// scientific otherwise, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), format_sig)
}

fn ci_text(ci: &Option<ConfidenceInterval>) -> String {
    match ci {
        Some(c) => format!("[{}, {}]", format_sig(c.lower), format_sig(c.upper)),
        None => "n/a".into(),
    }
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "Report: {}", r.title);
    let _ = writeln!(w, "schema {}, {}, design {}", r.schema, r.harness_version, r.design_fingerprint);
    let _ = writeln!(w, "generated {}", r.generated_at);
    let _ = writeln!(w);
    let counts: Vec<String> = r.status_counts.iter().map(|(s, n)| format!("{s} {n}")).collect();
    let _ = writeln!(w, "Trials: {}; total wall time {} s", counts.join(", "), format_sig(r.total_wall_time));
    for e in &r.environments {
        let env = &e.environment;
        let _ = writeln!(
            w,
            "Environment: {} {}, {}, {} cores, {} memory, executor {} ({} records)",
            env.os_name, env.os_version, env.cpu_model, env.logical_cores, env.total_memory, env.executor, e.records
        );
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "Groups (CI level {})", format_sig(r.ci_level));
    for g in &r.groups {
        let _ = writeln!(
            w,
            "  {} {} [{}] {}: n {}, mean {}, sd {}, CI {}",
            g.hypothesis_id,
            g.group,
            g.selector,
            g.metric,
            g.n,
            opt(g.mean),
            opt(g.sd),
            ci_text(&g.ci)
        );
    }
    let _ = writeln!(w);
    let _ = writeln!(w, "Hypotheses");
    for h in &r.hypotheses {
        let v = &h.verdict;
        let _ = writeln!(w, "  {}: {}", h.id, h.statement_alt);
        let _ = writeln!(w, "    H0: {}", h.statement_null);
        let _ = writeln!(
            w,
            "    units A {}, B {}; {} {}",
            v.n_units[0], v.n_units[1], v.pairing, v.direction
        );
        for (label, t) in std::iter::once(("test", &v.primary)).chain(v.secondary.as_ref().map(|t| ("advisory", t))) {
            let df = t.df.map(|d| format!(", df {}", format_sig(d))).unwrap_or_default();
            let _ = writeln!(
                w,
                "    {label} {} ({}): statistic {}{df}, p {}",
                t.method,
                t.mode,
                format_sig(t.statistic),
                format_sig(t.p_value)
            );
            for warning in &t.warnings {
                let _ = writeln!(w, "      warning: {warning}");
            }
        }
        let adj = v.adjustment.as_deref().map(|a| format!(" ({a})")).unwrap_or_default();
        let _ = writeln!(
            w,
            "    decision: {} (p{adj} {} vs alpha {})",
            v.decision.as_str(),
            format_sig(v.p_value),
            format_sig(v.alpha)
        );
        if let Some(e) = &v.effect_size {
            let kind = match e.kind {
                crate::stats::EffectKind::CohensD => "cohens-d",
                crate::stats::EffectKind::RankBiserial => "rank-biserial",
            };
            let _ = writeln!(w, "    effect size: {kind} {}", format_sig(e.value));
        }
        let _ = writeln!(w, "    CI A {}, CI B {}", ci_text(&v.ci_a), ci_text(&v.ci_b));
        let _ = writeln!(w, "    selection: {}", v.trace.classification);
        for line in &v.trace.rationale {
            let _ = writeln!(w, "      - {line}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits() {
        assert_eq!(format_sig(0.05), "0.05");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(123456.7), "123457");
        assert_eq!(format_sig(1234567.0), "1.23457e+06");
        assert_eq!(format_sig(0.0001234567), "0.000123457");
        assert_eq!(format_sig(0.00001234567), "1.23457e-05");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(999999.5), "1e+06");
        assert_eq!(format_sig(1e-99), "1e-99");
    }
}
