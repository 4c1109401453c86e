//! Shapiro–Wilk W with Royston's (1995) approximation, algorithm AS R94.
//!
//! Coefficients: `m_i = Phi^-1((i - 0.375)/(n + 0.25))`, with the two
//! outermost weights replaced by polynomials in `u = 1/sqrt(n)`:
//!
//! ```text
//! c1 = [0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056]
//! c2 = [0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633]
//! ```
//!
//! p-value: `n = 3` is exact, `p = (6/pi)(asin(sqrt(W)) - pi/3)`. For
//! `4 <= n <= 11`, with `gamma = -2.273 + 0.459 n`, `y = -ln(gamma - ln(1-W))`
//! is normal with mean `poly(c3, n)` and sd `exp(poly(c4, n))`; when
//! `ln(1-W) >= gamma` the p-value is reported as 1e-99. For
//! `12 <= n <= 5000`, `ln(1-W)` is normal with mean `poly(c5, ln n)` and sd
//! `exp(poly(c6, ln n))`:
//!
//! ```text
//! c3 = [0.544, -0.39978, 0.025054, -6.714e-4]
//! c4 = [1.3822, -0.77857, 0.062767, -0.0020322]
//! c5 = [-1.5861, -0.31082, -0.083751, 0.0038915]
//! c6 = [-0.4803, -0.082676, 0.0030302]
//! ```

use super::special::{normal_quantile, normal_sf};
use super::types::{Method, PMode, Sample, TestResult};
use crate::error::{Error, Result};

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Upper-half weights `a_1 >= a_2 >= ... >= a_{n/2} > 0`, applied to
/// `x_(n+1-i) - x_(i)`.
pub fn coefficients(n: usize) -> Result<Vec<f64>> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize { n, reason: format!("Shapiro-Wilk needs {MIN_N} <= n <= {MAX_N}") });
    }
    let nn2 = n / 2;
    if n == 3 {
        return Ok(vec![std::f64::consts::FRAC_1_SQRT_2]);
    }
    let an = n as f64;
    let mut m = Vec::with_capacity(nn2);
    for i in 1..=nn2 {
        m.push(normal_quantile((i as f64 - 0.375) / (an + 0.25))?);
    }
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;
    let mut a = m.clone();
    let (first, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        a[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    a[0] = a1;
    for v in &mut a[first..] {
        *v /= -fac;
    }
    Ok(a)
}

pub fn shapiro_wilk(s: &Sample) -> Result<TestResult> {
    let n = s.len();
    let half = coefficients(n)?;
    let x = s.sorted();
    let range = x[n - 1] - x[0];
    if range <= 0.0 {
        return Err(Error::DegenerateSample("Shapiro-Wilk on a constant sample".into()));
    }
    // Full antisymmetric weight vector over the order statistics.
    let mut a = vec![0.0; n];
    for (i, &w) in half.iter().enumerate() {
        a[i] = -w;
        a[n - 1 - i] = w;
    }
    let nf = n as f64;
    let sa = a.iter().sum::<f64>() / nf;
    let sx = x.iter().map(|v| v / range).sum::<f64>() / nf;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (ai, xi) in a.iter().zip(&x) {
        let asa = ai - sa;
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = ((ssassx - sax) * (ssassx + sax) / (ssa * ssx)).max(0.0);
    let w = 1.0 - w1;

    if n == 3 {
        const PI6: f64 = 1.909_859_317_102_74;
        const STQR: f64 = std::f64::consts::FRAC_PI_3;
        let p = (PI6 * (w.sqrt().asin() - STQR)).max(0.0);
        return Ok(TestResult::new(Method::ShapiroWilk, w, p, vec![n], PMode::Exact));
    }
    let y = w1.ln();
    let p = if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            1e-99
        } else {
            let y = -(gamma - y).ln();
            let m = poly(&C3, nf);
            let sd = poly(&C4, nf).exp();
            normal_sf((y - m) / sd)
        }
    } else {
        let ln_n = nf.ln();
        let m = poly(&C5, ln_n);
        let sd = poly(&C6, ln_n).exp();
        normal_sf((y - m) / sd)
    };
    Ok(TestResult::new(Method::ShapiroWilk, w, p, vec![n], PMode::Asymptotic))
}
