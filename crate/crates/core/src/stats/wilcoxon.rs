use super::ranks::{average_ranks, tie_term};
use super::special::{normal_cdf, normal_sf};
use super::types::{directed_p, EffectKind, EffectSize, Method, Mode, PMode, PairedSamples, TestResult};
use crate::error::{Error, Result};
use crate::model::Direction;

/// Largest number of non-zero differences with an exact null distribution.
pub const EXACT_MAX_N: usize = 25;

/// Exact null distribution of the doubled signed-rank sum `2 W+`.
///
/// `counts[s]` is the number of the `2^n` sign assignments whose positive
/// ranks sum to `s / 2`. Ranks are doubled so mid-ranks stay integral; the
/// recurrence is a subset-sum count and reproduces full enumeration.
fn doubled_rank_counts(ranks: &[f64]) -> Vec<u64> {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts
}

/// Wilcoxon signed-rank test on `d = a - b`; the statistic is `W+`.
pub fn wilcoxon_signed_rank(ps: &PairedSamples, direction: Direction, mode: Mode) -> Result<TestResult> {
    let mut warnings = Vec::new();
    let d: Vec<f64> = ps.differences().into_iter().filter(|v| *v != 0.0).collect();
    let zeros = ps.len() - d.len();
    if d.is_empty() {
        return Err(Error::DegenerateSample("all paired differences are zero".into()));
    }
    if zeros > 0 {
        warnings.push(format!("dropped {zeros} zero difference(s)"));
    }
    let n = d.len();
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = average_ranks(&abs);
    if !ties.is_empty() {
        warnings.push(format!("{} tie group(s) in |differences|, average ranks used", ties.len()));
    }
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let exact = match mode {
        Mode::Auto => n <= EXACT_MAX_N,
        Mode::Exact if n <= EXACT_MAX_N => true,
        Mode::Exact => {
            warnings.push(format!("exact mode needs n <= {EXACT_MAX_N} (n = {n}); using normal approximation"));
            false
        }
        Mode::Approx => false,
    };
    let (lower, upper, pmode) = if exact {
        let counts = doubled_rank_counts(&ranks);
        let obs = (2.0 * w_plus).round() as usize;
        let all = 2f64.powi(n as i32);
        let le: u64 = counts[..=obs].iter().sum();
        let ge: u64 = counts[obs..].iter().sum();
        (le as f64 / all, ge as f64 / all, PMode::Exact)
    } else {
        let nf = n as f64;
        let mu = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
        let sd = var.sqrt();
        let lower = normal_cdf((w_plus - mu + 0.5) / sd);
        let upper = normal_sf((w_plus - mu - 0.5) / sd);
        (lower.min(1.0), upper.min(1.0), PMode::NormalApproximation)
    };
    if n < 6 && direction == Direction::TwoSided {
        warnings.push(format!("small n ({n}): the two-sided p-value cannot fall below {}", 2.0 / 2f64.powi(n as i32)));
    }
    let mut r = TestResult::new(Method::WilcoxonSignedRank, w_plus, directed_p(direction, lower, upper), vec![n], pmode);
    r.effect_size = Some(EffectSize { kind: EffectKind::RankBiserial, value: (w_plus - w_minus) / total });
    r.warnings = warnings;
    Ok(r)
}
