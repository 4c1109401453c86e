//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use veritas::model::{
    Attestations, DesignBuilder, ExperimentDesign, GroupSelector, Hypothesis, Value, VariableDomain,
};
use veritas::orchestrator::TrialInput;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize, mean: f64, sd: f64) -> Vec<f64> {
    let d = Normal::new(mean, sd).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

/// Distinct values, so rank tests see no ties.
pub fn tie_free(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let mut s = v.clone();
        s.sort_by(f64::total_cmp);
        if s.windows(2).all(|w| w[0] != w[1]) && v.iter().all(|x| *x != 0.0) {
            return v;
        }
    }
}

/// Mid-rank of each value by direct counting.
pub fn oracle_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&x| {
            let less = values.iter().filter(|&&y| y < x).count() as f64;
            let equal = values.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// One-sided tail counts `(#{stat <= obs}, #{stat >= obs}, total)`.
pub type Tails = (u64, u64, u64);

pub fn two_sided(t: Tails) -> f64 {
    let (le, ge, total) = t;
    (2.0 * (le.min(ge) as f64) / total as f64).min(1.0)
}

/// Signed-rank W+ over all 2^n sign assignments of the |d| ranks.
pub fn wilcoxon_enumeration(d: &[f64]) -> (f64, Tails) {
    let abs: Vec<f64> = d.iter().map(|x| x.abs()).collect();
    let ranks = oracle_ranks(&abs);
    let obs: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).map(|(_, r)| r).sum();
    let n = d.len();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w <= obs {
            le += 1;
        }
        if w >= obs {
            ge += 1;
        }
    }
    (obs, (le, ge, 1 << n))
}

/// Visit every `k`-subset of `0..n` as a membership mask.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[bool])) {
    fn rec(start: usize, left: usize, mask: &mut Vec<bool>, f: &mut dyn FnMut(&[bool])) {
        if left == 0 {
            f(mask);
            return;
        }
        for i in start..=mask.len() - left {
            mask[i] = true;
            rec(i + 1, left - 1, mask, f);
            mask[i] = false;
        }
    }
    let mut mask = vec![false; n];
    rec(0, k, &mut mask, &mut f);
}

/// `U_a` by pairwise comparison.
pub fn u_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for x in a {
        for y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// U over all C(n_a + n_b, n_a) relabelings of the pooled values.
pub fn mann_whitney_enumeration(a: &[f64], b: &[f64]) -> (f64, Tails) {
    let obs = u_statistic(a, b);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for_each_subset(pooled.len(), a.len(), |mask| {
        let ga: Vec<f64> = pooled.iter().zip(mask).filter(|(_, m)| **m).map(|(x, _)| *x).collect();
        let gb: Vec<f64> = pooled.iter().zip(mask).filter(|(_, m)| !**m).map(|(x, _)| *x).collect();
        let u = u_statistic(&ga, &gb);
        le += (u <= obs) as u64;
        ge += (u >= obs) as u64;
        total += 1;
    });
    (obs, (le, ge, total))
}

/// `n_a n_b D`: the largest ECDF gap over every pooled point, by counting.
pub fn ks_scaled_brute(a: &[f64], b: &[f64]) -> u64 {
    let (na, nb) = (a.len() as i64, b.len() as i64);
    a.iter()
        .chain(b)
        .map(|&t| {
            let ca = a.iter().filter(|&&x| x <= t).count() as i64;
            let cb = b.iter().filter(|&&x| x <= t).count() as i64;
            (ca * nb - cb * na).unsigned_abs()
        })
        .max()
        .unwrap_or(0)
}

/// Permutation p-value `P(D >= D_obs)` over all relabelings.
pub fn ks_permutation(a: &[f64], b: &[f64]) -> f64 {
    let obs = ks_scaled_brute(a, b);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (mut ge, mut total) = (0u64, 0u64);
    for_each_subset(pooled.len(), a.len(), |mask| {
        let ga: Vec<f64> = pooled.iter().zip(mask).filter(|(_, m)| **m).map(|(x, _)| *x).collect();
        let gb: Vec<f64> = pooled.iter().zip(mask).filter(|(_, m)| !**m).map(|(x, _)| *x).collect();
        ge += (ks_scaled_brute(&ga, &gb) >= obs) as u64;
        total += 1;
    });
    ge as f64 / total as f64
}

const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_36,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Composite 10-point Gauss–Legendre over `[lo, hi]` with panels no wider
/// than `width`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, width: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    let panels = ((hi - lo).abs() / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// Normal CDF by quadrature of the density: lower tail integrated over
/// `[z - 40, z]` for negative `z`, else `1/2 + integral over [0, z]`.
pub fn normal_cdf_oracle(z: f64) -> f64 {
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if z < 0.0 {
        integrate(pdf, z - 40.0, z, 0.05)
    } else {
        0.5 + integrate(pdf, 0.0, z, 0.05)
    }
}

/// `Gamma((v+1)/2) / (sqrt(v pi) Gamma(v/2))` for integer `v` by the
/// half-integer recurrence.
pub fn t_density_constant(v: u32) -> f64 {
    // ratio(v) = Gamma((v+1)/2) / Gamma(v/2); ratio(1) = 1/sqrt(pi), ratio(2) = sqrt(pi)/2,
    // ratio(v + 2) = ratio(v) * (v+1)/v.
    let pi = std::f64::consts::PI;
    let mut r = if v % 2 == 1 { 1.0 / pi.sqrt() } else { pi.sqrt() / 2.0 };
    let mut k = if v % 2 == 1 { 1 } else { 2 };
    while k < v {
        r *= (k + 1) as f64 / k as f64;
        k += 2;
    }
    r / (v as f64 * pi).sqrt()
}

pub fn t_cdf_oracle(t: f64, v: u32) -> f64 {
    let c = t_density_constant(v);
    let vf = v as f64;
    let pdf = |x: f64| c * (1.0 + x * x / vf).powf(-(vf + 1.0) / 2.0);
    0.5 + integrate(pdf, 0.0, t, 0.02)
}

/// Two-sided t-test p-value by quadrature of the density's central part.
pub fn t_two_sided_oracle(t: f64, v: u32) -> f64 {
    let c = t_density_constant(v);
    let vf = v as f64;
    let pdf = |x: f64| c * (1.0 + x * x / vf).powf(-(vf + 1.0) / 2.0);
    1.0 - 2.0 * integrate(pdf, 0.0, t.abs(), 0.01)
}

pub fn oracle_mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn oracle_var(v: &[f64]) -> f64 {
    let m = oracle_mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}

/// Fully compliant checklist fixture: method, dataset and hyperparameter
/// factors, two replications, two seeds, two folds, one hypothesis.
pub fn compliant_design() -> ExperimentDesign {
    DesignBuilder::new("compliant")
        .independent("method", "compared model", VariableDomain::categorical(["baseline", "candidate"]), ["baseline", "candidate"])
        .independent("dataset", "benchmark dataset", VariableDomain::categorical(["d1", "d2"]), ["d1", "d2"])
        .independent("depth", "tree depth", VariableDomain::integer(), [2i64, 4])
        .control("budget", "training budget", VariableDomain::integer(), 10i64)
        .dependent("score", "validation score", VariableDomain::real())
        .replications(2)
        .seeds(2)
        .folds(2)
        .master_seed(7)
        .method_factor("method")
        .dataset_factor("dataset")
        .hyperparameter("depth")
        .attestations(Attestations {
            code_published: true,
            environment_published: true,
            data_published: true,
            model_published: true,
        })
        .hypothesis(Hypothesis::compare(
            "H1",
            "score",
            GroupSelector::single("method", "candidate"),
            GroupSelector::single("method", "baseline"),
        ))
        .build()
}

/// Standard normal draw from a trial's derived seed (Box–Muller over
/// SplitMix64), for in-process synthetic executors.
pub fn seeded_normal(seed: u64, stream: u64) -> f64 {
    let mut g = veritas::orchestrator::SplitMix64::new(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let u1 = ((g.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
    let u2 = ((g.next_u64() >> 11) as f64) / (1u64 << 53) as f64;
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn label(input: &TrialInput, name: &str) -> String {
    match input.bindings_x.get(name) {
        Some(Value::Label(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => String::new(),
    }
}

pub fn outcome(name: &str, value: f64) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert(name.to_string(), Value::Real(value));
    m
}
