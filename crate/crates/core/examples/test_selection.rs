//! How the selector picks a test: Shapiro-Wilk on each group, Levene when
//! both look normal, then a fixed row of the decision table.
//!
//! ```text
//! cargo run --example test_selection
//! ```

use veritas::selector::{classify, select_test, ALPHA_PRE};
use veritas::stats::{normal_quantile, Sample};

fn normal_scores(n: usize, mu: f64, sd: f64) -> Vec<f64> {
    (1..=n).map(|i| mu + sd * normal_quantile((i as f64 - 0.375) / (n as f64 + 0.25)).unwrap()).collect()
}

fn exponential_scores(n: usize) -> Vec<f64> {
    (1..=n).map(|i| -(1.0 - (i as f64 - 0.5) / n as f64).ln()).collect()
}

fn main() -> veritas::Result<()> {
    let n = 30;
    let cases = [
        ("two normal groups, same spread", normal_scores(n, 0.0, 1.0), normal_scores(n, 0.5, 1.0)),
        ("two normal groups, 5x spread", normal_scores(n, 0.0, 1.0), normal_scores(n, 0.0, 5.0)),
        ("two skewed groups", exponential_scores(n), exponential_scores(n)),
        ("one normal, one skewed", normal_scores(n, 1.0, 1.0), exponential_scores(n)),
    ];
    for (name, a, b) in cases {
        let c = classify(&Sample::new(a)?, &Sample::new(b)?, ALPHA_PRE)?;
        let tests: Vec<&str> = select_test(c.classification).iter().map(|m| m.as_str()).collect();
        println!("{name}");
        for check in &c.normality {
            println!("  Shapiro-Wilk {}: W {:.4}, p {:.4}", check.group, check.w.unwrap_or(f64::NAN), check.p_value.unwrap_or(f64::NAN));
        }
        if let Some(v) = &c.variance {
            println!("  Levene: p {:.4}", v.p_value.unwrap_or(f64::NAN));
        }
        println!("  -> {} : {}", c.classification, tests.join(" then "));
    }
    Ok(())
}
