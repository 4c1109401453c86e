use super::describe::{mean, variance};
use super::special::t_tails;
use super::types::{directed_p, Method, PMode, PairedSamples, Sample, TestResult};
use crate::error::{Error, Result};
use crate::model::Direction;

/// One-sample t on `d = a - b`, `df = n - 1`.
pub fn paired_t(ps: &PairedSamples, direction: Direction) -> Result<TestResult> {
    let d = ps.differences();
    let n = d.len();
    let sd = variance(&d)?.sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateSample("paired differences have zero variance".into()));
    }
    let df = (n - 1) as f64;
    let t = mean(&d) / (sd / (n as f64).sqrt());
    let (lower, upper) = t_tails(t, df)?;
    let mut r = TestResult::new(Method::PairedT, t, directed_p(direction, lower, upper), vec![n], PMode::Parametric);
    r.df = Some(df);
    Ok(r)
}

/// Welch–Satterthwaite degrees of freedom.
pub fn welch_df(var_a: f64, n_a: usize, var_b: f64, n_b: usize) -> f64 {
    let qa = var_a / n_a as f64;
    let qb = var_b / n_b as f64;
    (qa + qb).powi(2) / (qa * qa / (n_a - 1) as f64 + qb * qb / (n_b - 1) as f64)
}

pub fn welch_t(a: &Sample, b: &Sample, direction: Direction) -> Result<TestResult> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::UnsupportedSize { n: s.len(), reason: "Welch t needs at least 2 values per group".into() });
        }
    }
    let (va, vb) = (variance(a.values())?, variance(b.values())?);
    let (na, nb) = (a.len(), b.len());
    let se = (va / na as f64 + vb / nb as f64).sqrt();
    if se == 0.0 {
        return Err(Error::DegenerateSample("both groups are constant".into()));
    }
    let t = (mean(a.values()) - mean(b.values())) / se;
    let df = welch_df(va, na, vb, nb);
    let (lower, upper) = t_tails(t, df)?;
    let mut r = TestResult::new(Method::WelchT, t, directed_p(direction, lower, upper), vec![na, nb], PMode::Parametric);
    r.df = Some(df);
    Ok(r)
}
