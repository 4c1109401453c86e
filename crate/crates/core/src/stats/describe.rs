use serde::{Deserialize, Serialize};

use super::special::t_quantile;
use super::types::{ConfidenceInterval, Sample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Description {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n - 1) variance; `None` for a single observation.
    pub variance: Option<f64>,
    pub sd: Option<f64>,
}

/// Compensated (Neumaier) sum.
pub(crate) fn sum(values: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for &v in values {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn mean(values: &[f64]) -> f64 {
    sum(values) / values.len() as f64
}

/// Two-pass variance with the residual-sum correction, so an imprecise
/// first-pass mean does not leak into the result.
pub fn variance(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::UndefinedStatistic(format!("variance needs at least 2 values, got {n}")));
    }
    let m = mean(values);
    let mut ss = 0.0;
    let mut resid = 0.0;
    for &v in values {
        let d = v - m;
        ss += d * d;
        resid += d;
    }
    let nf = n as f64;
    Ok(((ss - resid * resid / nf) / (nf - 1.0)).max(0.0))
}

pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn describe(s: &Sample) -> Description {
    let v = s.values();
    let variance = variance(v).ok();
    Description { n: v.len(), mean: mean(v), variance, sd: variance.map(f64::sqrt) }
}

/// Student-t interval for the mean.
pub fn confidence_interval(s: &Sample, level: f64) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level must lie in (0,1), got {level}")));
    }
    let n = s.len();
    if n < 2 {
        return Err(Error::UndefinedStatistic(format!("confidence interval needs at least 2 values, got {n}")));
    }
    let m = mean(s.values());
    let sd = variance(s.values())?.sqrt();
    let q = t_quantile((1.0 + level) / 2.0, (n - 1) as f64)?;
    let half = q * sd / (n as f64).sqrt();
    Ok(ConfidenceInterval { level, lower: m - half, center: m, upper: m + half })
}
