use super::describe::{mean, variance};
use super::types::{EffectKind, EffectSize, PairedSamples, Sample};
use crate::error::{Error, Result};

/// Paired Cohen's d: `mean(d) / sd(d)` with `d = a - b`.
pub fn cohens_d_paired(ps: &PairedSamples) -> Result<EffectSize> {
    let d = ps.differences();
    let sd = variance(&d)?.sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateSample("paired differences have zero variance".into()));
    }
    Ok(EffectSize { kind: EffectKind::CohensD, value: mean(&d) / sd })
}

/// Unpaired Cohen's d with the pooled standard deviation.
pub fn cohens_d(a: &Sample, b: &Sample) -> Result<EffectSize> {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    if a.len() + b.len() < 3 {
        return Err(Error::UndefinedStatistic("pooled sd needs at least 3 values".into()));
    }
    let ss = |s: &Sample| if s.len() < 2 { Ok(0.0) } else { variance(s.values()).map(|v| v * (s.len() - 1) as f64) };
    let pooled = ((ss(a)? + ss(b)?) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 {
        return Err(Error::DegenerateSample("pooled standard deviation is zero".into()));
    }
    Ok(EffectSize { kind: EffectKind::CohensD, value: (mean(a.values()) - mean(b.values())) / pooled })
}
