use super::ranks::{average_ranks, tie_term};
use super::special::{normal_cdf, normal_sf};
use super::types::{directed_p, EffectKind, EffectSize, Method, Mode, PMode, Sample, TestResult};
use crate::error::Result;
use crate::model::Direction;

/// Largest `n_a * n_b` with an exact null distribution (tie-free data only).
pub const EXACT_MAX_PRODUCT: usize = 64;

/// Null distribution of `U_a` for tie-free data: `counts[u]` is the number
/// of the `C(n_a + n_b, n_a)` labelings giving `U_a = u`. Computed as the
/// count of `n_a`-subsets of ranks `1..=N` by rank sum.
fn u_counts(n_a: usize, n_b: usize) -> Vec<u64> {
    let total = n_a + n_b;
    let max_sum = (total * (total + 1)) / 2;
    // ways[k][s]: k-subsets of the ranks seen so far summing to s.
    let mut ways = vec![vec![0u64; max_sum + 1]; n_a + 1];
    ways[0][0] = 1;
    for rank in 1..=total {
        for k in (1..=n_a.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                let add = ways[k - 1][s - rank];
                if add != 0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    let offset = n_a * (n_a + 1) / 2;
    ways[n_a][offset..=offset + n_a * n_b].to_vec()
}

/// Mann–Whitney U. The statistic is `U_a = R_a - n_a(n_a + 1)/2`, the
/// number of (a, b) pairs with `a > b` (ties count one half).
pub fn mann_whitney_u(a: &Sample, b: &Sample, direction: Direction, mode: Mode) -> Result<TestResult> {
    let (na, nb) = (a.len(), b.len());
    let mut pooled = a.values().to_vec();
    pooled.extend_from_slice(b.values());
    let (ranks, ties) = average_ranks(&pooled);
    let r_a: f64 = ranks[..na].iter().sum();
    let u = r_a - (na * (na + 1)) as f64 / 2.0;
    let nn = (na * nb) as f64;
    let mut warnings = Vec::new();
    if !ties.is_empty() {
        warnings.push(format!("{} tie group(s) in pooled values, average ranks used", ties.len()));
    }
    let within = na * nb <= EXACT_MAX_PRODUCT;
    let exact = match mode {
        Mode::Auto => within && ties.is_empty(),
        Mode::Approx => false,
        Mode::Exact => {
            if !within {
                warnings.push(format!("exact mode needs n_a*n_b <= {EXACT_MAX_PRODUCT} (got {}); using normal approximation", na * nb));
            } else if !ties.is_empty() {
                warnings.push("exact mode refuses tied data; using normal approximation".into());
            }
            within && ties.is_empty()
        }
    };
    let (lower, upper, pmode) = if exact {
        let counts = u_counts(na, nb);
        let all: u64 = counts.iter().sum();
        let obs = u.round() as usize;
        let le: u64 = counts[..=obs].iter().sum();
        let ge: u64 = counts[obs..].iter().sum();
        (le as f64 / all as f64, ge as f64 / all as f64, PMode::Exact)
    } else {
        let n = (na + nb) as f64;
        let mu = nn / 2.0;
        let var = nn / 12.0 * ((n + 1.0) - tie_term(&ties) / (n * (n - 1.0)));
        if var <= 0.0 {
            warnings.push("all pooled values are tied".into());
            (1.0, 1.0, PMode::NormalApproximation)
        } else {
            let sd = var.sqrt();
            let lower = normal_cdf((u - mu + 0.5) / sd);
            let upper = normal_sf((u - mu - 0.5) / sd);
            (lower.min(1.0), upper.min(1.0), PMode::NormalApproximation)
        }
    };
    let mut r = TestResult::new(Method::MannWhitneyU, u, directed_p(direction, lower, upper), vec![na, nb], pmode);
    r.effect_size = Some(EffectSize { kind: EffectKind::RankBiserial, value: (2.0 * u / nn - 1.0).clamp(-1.0, 1.0) });
    r.warnings = warnings;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_separation() {
        let a = Sample::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Sample::new(vec![5.0, 6.0, 7.0, 8.0]).unwrap();
        let r = mann_whitney_u(&a, &b, Direction::TwoSided, Mode::Auto).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 2.0 / 70.0).abs() < 1e-15);
        assert_eq!(r.effect_size.unwrap().value, -1.0);
    }

    #[test]
    fn same_multiset() {
        let a = Sample::new(vec![3.0, 1.0, 2.0]).unwrap();
        let b = Sample::new(vec![2.0, 3.0, 1.0]).unwrap();
        let r = mann_whitney_u(&a, &b, Direction::TwoSided, Mode::Auto).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.effect_size.unwrap().value, 0.0);
    }

    #[test]
    fn counts_are_binomial() {
        assert_eq!(u_counts(4, 4).iter().sum::<u64>(), 70);
        assert_eq!(u_counts(8, 8).iter().sum::<u64>(), 12870);
        assert_eq!(u_counts(1, 64).len(), 65);
    }
}
