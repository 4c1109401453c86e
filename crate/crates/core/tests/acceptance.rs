//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the per-criterion verdict lines are always printed.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value as Json;

use common::*;
use veritas::model::{DesignBuilder, Direction, ExecutorSpec, ExperimentDesign, GroupSelector, Hypothesis, Trial, TrialCoords, Value, VariableDomain};
use veritas::orchestrator::{run_experiment, EnvironmentInfo, ExecutorConfig, FnExecutor, ProcessExecutor, RunRecord, RunStatus};
use veritas::provenance::{
    audit_checklist, format_sig, generate_report, read_archive, render_text, write_archive, ArchiveHeader, AuditStatus,
    DatasetReference, FairDescriptor, Report, RunArchive, CHECKLIST,
};
use veritas::selector::{classify, evaluate_design, select_test, AnalysisOptions, Classification, Decision, ALPHA_PRE};
use veritas::stats::{
    confidence_interval, describe, ks_two_sample, mann_whitney_u, normal_cdf, normal_quantile, paired_t, t_cdf, welch_t,
    wilcoxon_signed_rank, Method, Mode, PMode, PairedSamples, Sample, TestResult,
};

type Outcome = Result<String, String>;
type TwoSampleTest = fn(&[f64], &[f64]) -> TestResult;
type Criterion = (&'static str, fn() -> Outcome);

fn sample(v: Vec<f64>) -> Sample {
    Sample::new(v).unwrap()
}

fn c1_wilcoxon_enumeration() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 3..=12 {
        for seed in 0..100 {
            let mut r = rng(1000 * n as u64 + seed);
            let d = tie_free(&mut r, n);
            let ps = PairedSamples::from_values(d.clone(), vec![0.0; n]).unwrap();
            let (w, tails) = wilcoxon_enumeration(&d);
            let (le, ge, total) = tails;
            for (dir, expected) in [
                (Direction::TwoSided, two_sided(tails)),
                (Direction::Greater, ge as f64 / total as f64),
                (Direction::Less, le as f64 / total as f64),
            ] {
                let res = wilcoxon_signed_rank(&ps, dir, Mode::Auto).unwrap();
                if res.mode != PMode::Exact || res.statistic != w {
                    return Err(format!("n={n} seed={seed}: mode {:?}, W+ {} vs {w}", res.mode, res.statistic));
                }
                worst = worst.max((res.p_value - expected).abs());
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{cases} p-values, max |diff| {worst:.1e}, {secs:.2} s");
    if worst <= 1e-12 && secs < 10.0 { Ok(detail) } else { Err(detail) }
}

fn c2_mann_whitney_enumeration() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for na in 1..=8 {
        for nb in 1..=8 {
            for seed in 0..50 {
                let mut r = rng(((na * 10 + nb) as u64) << 16 | seed);
                let pooled = tie_free(&mut r, na + nb);
                let (a, b) = pooled.split_at(na);
                let (u, tails) = mann_whitney_enumeration(a, b);
                let (le, ge, total) = tails;
                for (dir, expected) in [
                    (Direction::TwoSided, two_sided(tails)),
                    (Direction::Greater, ge as f64 / total as f64),
                    (Direction::Less, le as f64 / total as f64),
                ] {
                    let res = mann_whitney_u(&sample(a.to_vec()), &sample(b.to_vec()), dir, Mode::Auto).unwrap();
                    if res.mode != PMode::Exact || res.statistic != u {
                        return Err(format!("{na}x{nb} seed {seed}: mode {:?}, U {} vs {u}", res.mode, res.statistic));
                    }
                    worst = worst.max((res.p_value - expected).abs());
                    cases += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{cases} p-values, max |diff| {worst:.1e}, {secs:.2} s");
    if worst <= 1e-12 && secs < 30.0 { Ok(detail) } else { Err(detail) }
}

fn c3_ks() -> Outcome {
    let start = Instant::now();
    for case in 0..1000u64 {
        let mut r = rng(30_000 + case);
        let na = r.random_range(1..=30);
        let nb = r.random_range(1..=30);
        // Every third case is coarsened to force ties.
        let coarse = case % 3 == 0;
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n)
                .map(|_| {
                    let x: f64 = r.random::<f64>() * 4.0;
                    if coarse { (x * 2.0).round() / 2.0 } else { x }
                })
                .collect()
        };
        let (a, b) = (draw(na), draw(nb));
        let res = ks_two_sample(&sample(a.clone()), &sample(b.clone()), Mode::Approx).unwrap();
        let scaled = ks_scaled_brute(&a, &b);
        if res.statistic != scaled as f64 / (na * nb) as f64 {
            return Err(format!("case {case}: D {} vs brute {scaled}/{}", res.statistic, na * nb));
        }
    }
    let mut worst: f64 = 0.0;
    let mut exact_cases = 0;
    for n in 1..=6 {
        for seed in 0..40u64 {
            let mut r = rng(40_000 + 100 * n as u64 + seed);
            let coarse = seed % 2 == 0;
            let mut draw = || -> Vec<f64> {
                (0..n).map(|_| {
                    let x: f64 = r.random::<f64>() * 3.0;
                    if coarse { x.round() } else { x }
                }).collect()
            };
            let (a, b) = (draw(), draw());
            let res = ks_two_sample(&sample(a.clone()), &sample(b.clone()), Mode::Auto).unwrap();
            if res.mode != PMode::Exact {
                return Err(format!("n={n}: not exact"));
            }
            worst = worst.max((res.p_value - ks_permutation(&a, &b)).abs());
            exact_cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("1000 D exact, {exact_cases} exact p max |diff| {worst:.1e}, {secs:.2} s");
    if worst <= 1e-12 && secs < 30.0 { Ok(detail) } else { Err(detail) }
}

fn c4_special_functions() -> Outcome {
    let mut worst_normal: f64 = 0.0;
    for i in 0..1000 {
        let z = -8.0 + 16.0 * i as f64 / 999.0;
        worst_normal = worst_normal.max((normal_cdf(z) - normal_cdf_oracle(z)).abs());
    }
    let mut worst_t: f64 = 0.0;
    for df in [1u32, 2, 5, 10, 50, 200] {
        for i in 0..1000 {
            let t = -20.0 + 40.0 * i as f64 / 999.0;
            worst_t = worst_t.max((t_cdf(t, df as f64).unwrap() - t_cdf_oracle(t, df)).abs());
        }
    }
    let detail = format!("normal max |diff| {worst_normal:.1e}, t max |diff| {worst_t:.1e}");
    if worst_normal <= 1e-12 && worst_t <= 1e-10 { Ok(detail) } else { Err(detail) }
}

fn c5_type_one() -> Outcome {
    let start = Instant::now();
    const SIMS: usize = 10_000;
    let n = 30;
    let mut rates = Vec::new();
    let tests: [(&str, TwoSampleTest); 5] = [
        ("paired-t", |a, b| paired_t(&PairedSamples::from_values(a.to_vec(), b.to_vec()).unwrap(), Direction::TwoSided).unwrap()),
        ("welch-t", |a, b| welch_t(&sample(a.to_vec()), &sample(b.to_vec()), Direction::TwoSided).unwrap()),
        ("wilcoxon", |a, b| {
            wilcoxon_signed_rank(&PairedSamples::from_values(a.to_vec(), b.to_vec()).unwrap(), Direction::TwoSided, Mode::Auto).unwrap()
        }),
        ("mwu", |a, b| mann_whitney_u(&sample(a.to_vec()), &sample(b.to_vec()), Direction::TwoSided, Mode::Auto).unwrap()),
        ("ks", |a, b| ks_two_sample(&sample(a.to_vec()), &sample(b.to_vec()), Mode::Auto).unwrap()),
    ];
    let mut ok = true;
    for (k, (name, test)) in tests.iter().enumerate() {
        let mut r = rng(50_000 + k as u64);
        let mut rejections = 0;
        for _ in 0..SIMS {
            let a = normals(&mut r, n, 0.0, 1.0);
            let b = normals(&mut r, n, 0.0, 1.0);
            if test(&a, &b).p_value < 0.05 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / SIMS as f64;
        ok &= (0.03..=0.06).contains(&rate);
        rates.push(format!("{name} {rate:.4}"));
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{}, {secs:.1} s", rates.join(", "));
    if ok && secs < 120.0 { Ok(detail) } else { Err(detail) }
}

/// Construction for the selector rows: a deterministic shape plus small
/// seeded jitter, shuffled.
fn shaped(r: &mut rand_chacha::ChaCha8Rng, shape: &str, scale: f64, shift: f64) -> Vec<f64> {
    let n = 30;
    let jitter = normals(r, n, 0.0, 0.01);
    let mut v: Vec<f64> = (1..=n)
        .map(|i| {
            let base = match shape {
                "normal" => normal_quantile((i as f64 - 0.375) / (n as f64 + 0.25)).unwrap(),
                _ => -(1.0 - (i as f64 - 0.5) / n as f64).ln(),
            };
            shift + scale * base
        })
        .zip(jitter)
        .map(|(x, j)| x + j)
        .collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

fn c6_selector_rows() -> Outcome {
    let rows: [(&str, Classification, Vec<Method>); 4] = [
        ("normal/equal", Classification::NORMAL_EQUAL, vec![Method::PairedT]),
        ("normal/unequal", Classification::NORMAL_UNEQUAL, vec![Method::WelchT]),
        ("not-normal", Classification::NOT_NORMAL, vec![Method::WilcoxonSignedRank]),
        ("mixed", Classification::MIXED, vec![Method::MannWhitneyU, Method::KsTwoSample]),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, (name, expected, tests)) in rows.iter().enumerate() {
        let mut hits = 0;
        for seed in 0..1000u64 {
            let mut r = rng(60_000 + 10_000 * k as u64 + seed);
            let (a, b) = match k {
                0 => (shaped(&mut r, "normal", 1.0, 0.0), shaped(&mut r, "normal", 1.0, 0.3)),
                1 => (shaped(&mut r, "normal", 1.0, 0.0), shaped(&mut r, "normal", 5.0, 0.0)),
                2 => (shaped(&mut r, "exp", 1.0, 0.0), shaped(&mut r, "exp", 1.0, 0.2)),
                _ => (shaped(&mut r, "normal", 1.0, 0.0), shaped(&mut r, "exp", 1.0, 0.0)),
            };
            let c = classify(&sample(a), &sample(b), ALPHA_PRE).unwrap();
            if c.classification == *expected && select_test(c.classification) == *tests {
                hits += 1;
            }
        }
        ok &= hits >= 950;
        parts.push(format!("{name} {hits}/1000"));
    }
    let detail = parts.join(", ");
    if ok { Ok(detail) } else { Err(detail) }
}

const PIPELINE_EXECUTOR: &str = r#"import json, random, sys
with open(sys.argv[1]) as f:
    t = json.load(f)
x = t["bindings_X"]
rng = random.Random(t["derived_seed"])
score = {"baseline": 0.70, "candidate": 0.74}[x["method"]] + {"d1": 0.0, "d2": 0.03}[x["dataset"]]
score += 0.002 * len(t["data"]["test"]) + rng.gauss(0.0, 0.02)
with open(sys.argv[2], "w") as f:
    json.dump({"schema": "veritas_trial_v1", "outcomes": {"score": score}}, f)
"#;

fn pipeline_design() -> ExperimentDesign {
    let mut d = DesignBuilder::new("replicability")
        .independent("method", "compared model", VariableDomain::categorical(["baseline", "candidate"]), ["baseline", "candidate"])
        .independent("dataset", "benchmark dataset", VariableDomain::categorical(["d1", "d2"]), ["d1", "d2"])
        .dependent("score", "held-out score", VariableDomain::real())
        .replications(2)
        .seeds(2)
        .folds(3)
        .master_seed(424242)
        .method_factor("method")
        .dataset_factor("dataset")
        .dataset_items("d1", 30)
        .dataset_items("d2", 25)
        .hypothesis(Hypothesis::compare("H1", "score", GroupSelector::single("method", "candidate"), GroupSelector::single("method", "baseline")))
        .build();
    d.executor = Some(ExecutorSpec {
        command: vec!["python3".into(), "exec.py".into(), "{input}".into(), "{output}".into()],
        timeout: 60.0,
        working_dir: None,
        env: BTreeMap::new(),
        parallelism: None,
    });
    d
}

fn pipeline(dir: &Path, design: &ExperimentDesign, name: &str, parallelism: usize) -> Result<(String, String), String> {
    let mut cfg = ExecutorConfig::new(design.executor.as_ref().unwrap().command.clone());
    cfg.working_dir = dir.to_path_buf();
    cfg.timeout = Duration::from_secs(60);
    cfg.parallelism = parallelism;
    let exec = ProcessExecutor::new(cfg).map_err(|e| e.to_string())?;
    let path = dir.join(format!("{name}.jsonl"));
    let summary = run_experiment(design, &exec, &path, parallelism).map_err(|e| e.to_string())?;
    if !summary.all_ok() {
        return Err(format!("{name}: trials failed: {:?}", summary.counts));
    }
    let archive = read_archive(&path).map_err(|e| e.to_string())?;
    let options = AnalysisOptions::default();
    let verdicts = evaluate_design(design, &archive.records, &options).map_err(|e| e.to_string())?;
    let report = generate_report(design, &archive, &verdicts, &options).map_err(|e| e.to_string())?;
    Ok((archive.canonical_string().map_err(|e| e.to_string())?, report.canonical().to_json().map_err(|e| e.to_string())?))
}

fn c7_replicability() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("exec.py"), PIPELINE_EXECUTOR).map_err(|e| e.to_string())?;
    let design = pipeline_design();
    let (a1, r1) = pipeline(dir.path(), &design, "first", 1)?;
    let (a2, r2) = pipeline(dir.path(), &design, "second", 1)?;
    let (a8, r8) = pipeline(dir.path(), &design, "parallel", 8)?;
    let n = a1.lines().count() - 1;
    let same = a1 == a2 && r1 == r2 && a1 == a8 && r1 == r8;
    let detail = format!(
        "{n} records; rerun archive {} report {}; parallelism 8 archive {} report {}",
        eq(a1 == a2), eq(r1 == r2), eq(a1 == a8), eq(r1 == r8)
    );
    if same { Ok(detail) } else { Err(detail) }
}

fn eq(b: bool) -> &'static str {
    if b { "identical" } else { "DIFFERENT" }
}

/// Synthetic executor for the compliant design: candidate scores higher.
fn compliant_executor() -> FnExecutor<impl Fn(&veritas::orchestrator::TrialInput) -> Result<BTreeMap<String, Value>, String> + Sync> {
    FnExecutor::new("synthetic", |t| {
        let shift = if label(t, "method") == "candidate" { 0.5 } else { 0.0 };
        Ok(outcome("score", shift + seeded_normal(t.derived_seed, 1)))
    })
}

fn complete_fair() -> FairDescriptor {
    let mut f = FairDescriptor::new("doi:10.5281/zenodo.0000000", "compliant fixture", "CC-BY-4.0");
    f.datasets.push(DatasetReference { name: "d1".into(), source: "https://example.org/d1.csv".into(), sha256: "0".repeat(64) });
    f
}

fn c8_mutation_matrix() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let design = compliant_design();
    let path = dir.path().join("archive.jsonl");
    run_experiment(&design, &compliant_executor(), &path, 2).map_err(|e| e.to_string())?;
    let archive = read_archive(&path).map_err(|e| e.to_string())?;
    let options = AnalysisOptions::default();
    let verdicts = evaluate_design(&design, &archive.records, &options).map_err(|e| e.to_string())?;
    let report = generate_report(&design, &archive, &verdicts, &options).map_err(|e| e.to_string())?;
    let fair = complete_fair();

    let base = audit_checklist(&design, Some(&archive), Some(&report), Some(&fair));
    let (pass, manual) = (base.count(AuditStatus::Pass), base.count(AuditStatus::ManualAttestation));
    if pass != 12 || manual != 4 {
        return Err(format!("compliant fixture: {pass} pass, {manual} manual-attestation"));
    }
    let mut flipped = 0;
    for item in 1..=16 {
        let (mut d, mut rep, mut f) = (design.clone(), report.clone(), fair.clone());
        match item {
            1 => d.hypotheses[0].statement_alt.clear(),
            2 => d.variables.iter_mut().find(|v| v.name == "method").unwrap().description.clear(),
            3 => d.variables.iter_mut().find(|v| v.name == "budget").unwrap().description.clear(),
            4 => d.variables.iter_mut().find(|v| v.name == "score").unwrap().description.clear(),
            5 => d.designations.method = None,
            6 => d.designations.dataset = None,
            7 => d.replications = 1,
            8 => d.seed_count = 1,
            9 => d.cv_folds = 0,
            10 => d.designations.hyperparameters.clear(),
            11 => rep.groups[0].sd = None,
            12 => rep.hypotheses.clear(),
            13 => d.attestations.code_published = false,
            14 => d.attestations.environment_published = false,
            15 => f.license.clear(),
            _ => d.attestations.model_published = false,
        }
        let audit = audit_checklist(&d, Some(&archive), Some(&rep), Some(&f));
        let failed: Vec<usize> = audit.failures().map(|i| i.number).collect();
        if failed != vec![item] {
            return Err(format!("mutating item {item} ({}) failed items {failed:?}", CHECKLIST[item - 1]));
        }
        flipped += 1;
    }
    Ok(format!("compliant 12 pass + 4 manual; {flipped}/16 mutations flip exactly their own item"))
}

fn verdict_design(master_seed: u64) -> ExperimentDesign {
    DesignBuilder::new("shift")
        .independent("method", "compared model", VariableDomain::categorical(["A", "B"]), ["A", "B"])
        .independent("dataset", "benchmark dataset", VariableDomain::categorical(["d1", "d2"]), ["d1", "d2"])
        .dependent("metric", "outcome", VariableDomain::real())
        .replications(2)
        .seeds(3)
        .folds(5)
        .master_seed(master_seed)
        .method_factor("method")
        .dataset_factor("dataset")
        .hypothesis(Hypothesis::compare("H1", "metric", GroupSelector::single("method", "B"), GroupSelector::single("method", "A")))
        .build()
}

/// Outcome = dataset offset + shift for method B + N(0, 1) noise.
fn shifted_verdict(master_seed: u64, shift: f64, dir: &Path) -> Result<veritas::selector::Verdict, String> {
    let design = verdict_design(master_seed);
    let exec = FnExecutor::new("shift", move |t| {
        let offset = if label(t, "dataset") == "d2" { 0.2 } else { 0.0 };
        let s = if label(t, "method") == "B" { shift } else { 0.0 };
        Ok(outcome("metric", offset + s + seeded_normal(t.derived_seed, 2)))
    });
    let path = dir.join(format!("shift-{master_seed}-{shift}.jsonl"));
    run_experiment(&design, &exec, &path, 4).map_err(|e| e.to_string())?;
    let archive = read_archive(&path).map_err(|e| e.to_string())?;
    let mut v = evaluate_design(&design, &archive.records, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
    Ok(v.remove(0))
}

fn c9_verdict_sanity() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let v = shifted_verdict(2024, 1.0, dir.path())?;
    let shifted_ok = v.decision == Decision::RejectH0 && v.primary.p_value < 1e-4;
    let mut kept = 0;
    for seed in 0..100 {
        if shifted_verdict(seed, 0.0, dir.path())?.decision == Decision::FailToRejectH0 {
            kept += 1;
        }
    }
    let detail = format!(
        "shift 1 sd: {} p {:.2e} via {} ({} units); zero shift: {kept}/100 fail to reject",
        v.decision.as_str(),
        v.primary.p_value,
        v.primary.method,
        v.n_units[0]
    );
    if shifted_ok && kept >= 94 { Ok(detail) } else { Err(detail) }
}

fn random_value(r: &mut rand_chacha::ChaCha8Rng) -> Value {
    match r.random_range(0..6) {
        0 => Value::Integer(r.random::<i64>()),
        1 => Value::Real(r.random::<f64>() * 10f64.powi(r.random_range(-300..300))),
        2 => Value::Real(-(r.random::<f64>())),
        3 => Value::Label(format!("lvl \"{}\" \\ é {}", r.random::<u16>(), r.random::<u8>())),
        4 => Value::Real(f64::from_bits(r.random::<u64>() & 0x7FEF_FFFF_FFFF_FFFF)),
        _ => Value::Real(r.random_range(-3..3) as f64),
    }
}

fn random_record(r: &mut rand_chacha::ChaCha8Rng, index: u64) -> RunRecord {
    let status = [RunStatus::Ok, RunStatus::Failed, RunStatus::Timeout, RunStatus::InvalidOutput][r.random_range(0..4)];
    let mut bx = BTreeMap::new();
    for k in 0..r.random_range(0..4) {
        bx.insert(format!("x{k}"), random_value(r));
    }
    let mut bc = BTreeMap::new();
    bc.insert("c".to_string(), random_value(r));
    let outcomes = (status == RunStatus::Ok).then(|| {
        let mut m = BTreeMap::new();
        m.insert("y".to_string(), random_value(r));
        m
    });
    RunRecord {
        trial: Trial {
            index,
            coords: TrialCoords {
                grid_point: r.random(),
                seed_index: r.random(),
                fold_index: r.random(),
                replication: r.random(),
            },
            bindings_x: bx,
            bindings_c: bc,
            derived_seed: r.random(),
        },
        status,
        outcomes_y: outcomes,
        detail: (status != RunStatus::Ok).then(|| format!("detail\n{}", r.random::<u32>())),
        wall_time: r.random::<f64>() * 100.0,
        environment: EnvironmentInfo::capture("roundtrip"),
        started_at: "2024-01-01T00:00:00.000001Z".into(),
        finished_at: "2024-01-01T00:00:01.5Z".into(),
    }
}

fn json_f64(v: &Json) -> f64 {
    v.as_f64().expect("number")
}

fn c10_roundtrip_and_recompute() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut r = rng(100_000);
    let records: Vec<RunRecord> = (0..1000).map(|i| random_record(&mut r, i)).collect();
    let archive = RunArchive::new(ArchiveHeader::new("f".repeat(64).as_str()), records);
    let path = dir.path().join("random.jsonl");
    write_archive(&path, &archive).map_err(|e| e.to_string())?;
    let back = read_archive(&path).map_err(|e| e.to_string())?;
    if back != archive {
        let i = (0..1000).find(|&i| back.records[i] != archive.records[i]);
        let diff = i.map(|i| format!("{:?}\nvs\n{:?}", archive.records[i], back.records[i]));
        return Err(format!("1000-record archive changed on round trip: {diff:?}"));
    }

    // Recompute every report number from the archive alone.
    let design = verdict_design(77);
    let exec = FnExecutor::new("shift", |t| {
        let s = if label(t, "method") == "B" { 0.4 } else { 0.0 };
        Ok(outcome("metric", s + seeded_normal(t.derived_seed, 3)))
    });
    let apath = dir.path().join("analysis.jsonl");
    run_experiment(&design, &exec, &apath, 3).map_err(|e| e.to_string())?;
    let archive = read_archive(&apath).map_err(|e| e.to_string())?;
    let options = AnalysisOptions::default();
    let verdicts = evaluate_design(&design, &archive.records, &options).map_err(|e| e.to_string())?;
    let report = generate_report(&design, &archive, &verdicts, &options).map_err(|e| e.to_string())?;
    let rpath = dir.path().join("report.json");
    report.save(&rpath).map_err(|e| e.to_string())?;
    let doc: Json = serde_json::from_str(&std::fs::read_to_string(&rpath).unwrap()).unwrap();
    let loaded = Report::load(&rpath).map_err(|e| e.to_string())?;
    if loaded != report {
        return Err("report changed on JSON round trip".into());
    }

    let mut checked = 0;
    let mut mismatch = Vec::new();
    let mut check = |what: &str, stored: f64, recomputed: f64| {
        checked += 1;
        if stored.to_bits() != recomputed.to_bits() {
            mismatch.push(format!("{what}: {stored} vs {recomputed}"));
        }
    };
    for g in doc["groups"].as_array().unwrap() {
        let level = if g["group"] == "A" { "B" } else { "A" };
        let values: Vec<f64> = archive
            .records
            .iter()
            .filter(|rec| rec.status == RunStatus::Ok && rec.trial.bindings_x["method"] == Value::from(level))
            .map(|rec| rec.outcomes_y.as_ref().unwrap()["metric"].as_f64().unwrap())
            .collect();
        check("n", json_f64(&g["n"]), values.len() as f64);
        let s = sample(values);
        let d = describe(&s);
        let ci = confidence_interval(&s, 0.95).unwrap();
        check("mean", json_f64(&g["mean"]), d.mean);
        check("sd", json_f64(&g["sd"]), d.sd.unwrap());
        check("ci.lower", json_f64(&g["ci"]["lower"]), ci.lower);
        check("ci.upper", json_f64(&g["ci"]["upper"]), ci.upper);
    }
    total_wall(&archive, &doc, &mut check);
    // Pair units: replication means per (dataset, seed, fold), in key order.
    let mut units: BTreeMap<(String, u32, u32), [Vec<f64>; 2]> = BTreeMap::new();
    for rec in archive.records.iter().filter(|r| r.status == RunStatus::Ok) {
        let x = &rec.trial.bindings_x;
        let key = (x["dataset"].to_string(), rec.trial.coords.seed_index, rec.trial.coords.fold_index);
        let slot = if x["method"] == Value::from("B") { 0 } else { 1 };
        units.entry(key).or_default()[slot].push(rec.outcomes_y.as_ref().unwrap()["metric"].as_f64().unwrap());
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let a: Vec<f64> = units.values().map(|u| mean(&u[0])).collect();
    let b: Vec<f64> = units.values().map(|u| mean(&u[1])).collect();
    let v = &doc["hypotheses"][0]["verdict"];
    let method: Method = serde_json::from_value(v["primary"]["method"].clone()).unwrap();
    let ps = PairedSamples::from_values(a.clone(), b.clone()).unwrap();
    let re = match method {
        Method::PairedT => paired_t(&ps, Direction::TwoSided).unwrap(),
        Method::WelchT => welch_t(&sample(a.clone()), &sample(b.clone()), Direction::TwoSided).unwrap(),
        Method::WilcoxonSignedRank => wilcoxon_signed_rank(&ps, Direction::TwoSided, Mode::Auto).unwrap(),
        _ => mann_whitney_u(&sample(a.clone()), &sample(b.clone()), Direction::TwoSided, Mode::Auto).unwrap(),
    };
    check("statistic", json_f64(&v["primary"]["statistic"]), re.statistic);
    check("p_value", json_f64(&v["primary"]["p_value"]), re.p_value);
    check("ci_a.lower", json_f64(&v["ci_a"]["lower"]), confidence_interval(&sample(a), 0.95).unwrap().lower);
    check("ci_b.upper", json_f64(&v["ci_b"]["upper"]), confidence_interval(&sample(b), 0.95).unwrap().upper);

    let text = render_text(&loaded);
    for g in &loaded.groups {
        let needle = format!("mean {}, sd {}", format_sig(g.mean.unwrap()), format_sig(g.sd.unwrap()));
        if !text.contains(&needle) {
            mismatch.push(format!("text lacks {needle:?}"));
        }
    }
    if !text.contains(&format!("p {}", format_sig(loaded.hypotheses[0].verdict.primary.p_value))) {
        mismatch.push("text lacks the primary p-value".into());
    }
    if mismatch.is_empty() {
        Ok(format!("1000 records round-trip; {checked} report numbers recomputed bit-exactly ({method})"))
    } else {
        Err(mismatch.join("; "))
    }
}

fn total_wall(archive: &RunArchive, doc: &Json, check: &mut impl FnMut(&str, f64, f64)) {
    let total: f64 = archive.records.iter().map(|r| r.wall_time).sum();
    check("total_wall_time", json_f64(&doc["total_wall_time"]), total);
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact Wilcoxon equals sign enumeration", c1_wilcoxon_enumeration),
        ("exact Mann-Whitney U equals labeling enumeration", c2_mann_whitney_enumeration),
        ("KS statistic and exact p equal brute force", c3_ks),
        ("special functions within tolerance", c4_special_functions),
        ("type-I calibration in [0.03, 0.06]", c5_type_one),
        ("selector conforms to the decision table", c6_selector_rows),
        ("replicable archives and reports", c7_replicability),
        ("checklist mutation matrix", c8_mutation_matrix),
        ("end-to-end verdict sanity", c9_verdict_sanity),
        ("archive round trip and report recompute", c10_roundtrip_and_recompute),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
