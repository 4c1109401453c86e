use super::special::kolmogorov_sf;
use super::types::{Method, Mode, PMode, Sample, TestResult};
use crate::error::Result;

/// Largest number of labelings `C(n_a + n_b, n_a)` for the exact test.
pub const EXACT_MAX_LABELINGS: u64 = 20_000;

/// `C(n, k)`, or `None` once it exceeds `limit`.
pub(crate) fn binomial_capped(n: usize, k: usize, limit: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > limit as u128 {
            return None;
        }
    }
    Some(c as u64)
}

/// `n_a * n_b * D` by merge-scan of the sorted samples; evaluated only
/// after each run of equal values so ties never split.
fn scaled_distance(a: &[f64], b: &[f64]) -> u64 {
    let (na, nb) = (a.len() as i128, b.len() as i128);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best: i128 = 0;
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        best = best.max((i as i128 * nb - j as i128 * na).abs());
    }
    best as u64
}

/// Number of labelings of the pooled values with scaled distance `< d`.
/// Paths over (a-count, b-count); the bound is checked at the end of each
/// run of tied pooled values.
fn labelings_below(pooled_sorted: &[f64], na: usize, nb: usize, d: u64) -> u64 {
    let n = na + nb;
    let mut ways = vec![0u64; na + 1];
    ways[0] = 1;
    for t in 1..=n {
        let mut next = vec![0u64; na + 1];
        for i in 0..=na.min(t - 1) {
            let w = ways[i];
            if w == 0 {
                continue;
            }
            if t - 1 - i < nb {
                next[i] += w;
            }
            if i < na {
                next[i + 1] += w;
            }
        }
        let block_end = t == n || pooled_sorted[t] != pooled_sorted[t - 1];
        if block_end {
            for (i, w) in next.iter_mut().enumerate() {
                let j = t as i128 - i as i128;
                if j < 0 || j as usize > nb {
                    *w = 0;
                    continue;
                }
                if (i as i128 * nb as i128 - j * na as i128).unsigned_abs() as u64 >= d {
                    *w = 0;
                }
            }
        }
        ways = next;
    }
    ways[na]
}

/// Two-sample Kolmogorov–Smirnov test, always two-sided.
pub fn ks_two_sample(a: &Sample, b: &Sample, mode: Mode) -> Result<TestResult> {
    let (sa, sb) = (a.sorted(), b.sorted());
    let (na, nb) = (sa.len(), sb.len());
    let scaled = scaled_distance(&sa, &sb);
    let d = scaled as f64 / (na * nb) as f64;
    let labelings = binomial_capped(na + nb, na, EXACT_MAX_LABELINGS);
    let mut warnings = Vec::new();
    let exact = match (mode, labelings) {
        (Mode::Approx, _) => None,
        (_, Some(total)) => Some(total),
        (Mode::Exact, None) => {
            warnings.push(format!("exact mode needs C(n_a+n_b, n_a) <= {EXACT_MAX_LABELINGS}; using the asymptotic distribution"));
            None
        }
        (Mode::Auto, None) => None,
    };
    let (p, pmode) = match exact {
        Some(total) => {
            let mut pooled = sa.clone();
            pooled.extend_from_slice(&sb);
            pooled.sort_by(f64::total_cmp);
            let below = labelings_below(&pooled, na, nb, scaled);
            ((total - below) as f64 / total as f64, PMode::Exact)
        }
        None => {
            let en = (na * nb) as f64 / (na + nb) as f64;
            (kolmogorov_sf(en.sqrt() * d)?, PMode::Asymptotic)
        }
    };
    let mut r = TestResult::new(Method::KsTwoSample, d, p, vec![na, nb], pmode);
    r.warnings = warnings;
    Ok(r)
}
