use super::describe::{mean, median};
use super::special::f_sf;
use super::types::{Method, PMode, Sample, TestResult};
use crate::error::{Error, Result};

/// Brown–Forsythe variant of Levene's test for two groups: a one-way F
/// test on absolute deviations from each group's median, `F(1, N - 2)`.
pub fn levene(a: &Sample, b: &Sample) -> Result<TestResult> {
    for (name, s) in [("a", a), ("b", b)] {
        if s.len() < 2 {
            return Err(Error::UnsupportedSize { n: s.len(), reason: format!("Levene needs at least 2 values in group {name}") });
        }
    }
    let deviations = |s: &Sample| {
        let m = median(&s.sorted());
        s.values().iter().map(|v| (v - m).abs()).collect::<Vec<_>>()
    };
    let za = deviations(a);
    let zb = deviations(b);
    let (ma, mb) = (mean(&za), mean(&zb));
    let (na, nb) = (za.len() as f64, zb.len() as f64);
    let total = na + nb;
    let grand = (na * ma + nb * mb) / total;
    let between = na * (ma - grand).powi(2) + nb * (mb - grand).powi(2);
    let within: f64 = za.iter().map(|z| (z - ma).powi(2)).sum::<f64>() + zb.iter().map(|z| (z - mb).powi(2)).sum::<f64>();
    if within <= 0.0 {
        let what = if between <= 0.0 { "all deviations from the median are equal in both groups" } else { "deviations from the median are constant within each group" };
        return Err(Error::DegenerateSample(format!("Levene: {what}")));
    }
    let df2 = total - 2.0;
    let f = df2 * between / within;
    let p = f_sf(f, 1.0, df2)?;
    let mut r = TestResult::new(Method::Levene, f, p, vec![za.len(), zb.len()], PMode::Parametric);
    r.df = Some(df2);
    Ok(r)
}
