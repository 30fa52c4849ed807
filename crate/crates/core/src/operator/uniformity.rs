use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arithmetic::exact::{frac, ln_abs_sin_pi, rational_to_f64};
use crate::error::{invalid, Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// Lagrange-ratio statistic of a sample set {θ_j}:
/// max_{x ∈ [−1,1]} max_i (1/k) Σ_{j≠i} ln(|x − c_j| / |c_i − c_j|), c_j = cos 2πθ_j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uniformity {
    /// Attained value (grid maximum after refinement): a lower bound on the max.
    pub epsilon: f64,
    /// Certified upper bound from the trigonometric Bernstein inequality.
    pub upper: f64,
    pub k: usize,
    pub argmax_i: usize,
    pub argmax_x: f64,
}

/// The set is ε-uniform for every ε ≥ `upper`. `grid` Chebyshev angles
/// t = π(m + ½)/grid plus both endpoints are scanned, then each sample's best
/// grid point is refined by golden-section search.
pub fn uniformity_product(samples: &[BigRational], grid: usize) -> Result<Uniformity> {
    if samples.len() < 2 {
        return Err(invalid("need at least two samples"));
    }
    if grid < 1000 {
        return Err(invalid(format!("grid size must be ≥ 1000, got {grid}")));
    }
    let n = samples.len();
    let k = n - 1;
    let thetas: Vec<BigRational> = samples.iter().map(frac).collect();
    let c: Vec<f64> = thetas.iter().map(|t| (2.0 * std::f64::consts::PI * rational_to_f64(t)).cos()).collect();

    // ln|c_i − c_j| = ln 2 + ln|sin π(θ_i + θ_j)| + ln|sin π(θ_i − θ_j)|, exactly reduced
    let mut denom = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let s = ln_abs_sin_pi(&(&thetas[i] + &thetas[j]));
            let d = ln_abs_sin_pi(&(&thetas[i] - &thetas[j]));
            if s == f64::NEG_INFINITY || d == f64::NEG_INFINITY {
                return Err(Error::DegenerateSet { i: i.min(j), j: i.max(j) });
            }
            denom[i] += LN2 + s + d;
        }
    }
    let value = |i: usize, t: f64| -> f64 {
        let x = t.cos();
        let num: f64 = (0..n).filter(|&j| j != i).map(|j| (x - c[j]).abs().ln()).sum();
        (num - denom[i]) / k as f64
    };

    let pi = std::f64::consts::PI;
    let mut ts: Vec<f64> = vec![0.0];
    ts.extend((0..grid).map(|m| pi * (m as f64 + 0.5) / grid as f64));
    ts.push(pi);

    let mut grid_max = f64::NEG_INFINITY;
    let mut best_t = vec![(f64::NEG_INFINITY, 0.0); n];
    for &t in &ts {
        for (i, b) in best_t.iter_mut().enumerate() {
            let v = value(i, t);
            if v > b.0 {
                *b = (v, t);
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, 0usize, 0.0f64);
    for (i, &(v, t)) in best_t.iter().enumerate() {
        grid_max = grid_max.max(v);
        let h = pi / grid as f64;
        let (rv, rt) = golden_max(|t| value(i, t), (t - h).max(0.0), (t + h).min(pi));
        let (v, t) = if rv > v { (rv, rt) } else { (v, t) };
        if v > best.0 {
            best = (v, i, t);
        }
    }
    let kh = k as f64 * pi / (2.0 * grid as f64);
    let upper = if kh < 1.0 { grid_max - (1.0 - kh).ln() / k as f64 } else { f64::INFINITY };
    Ok(Uniformity { epsilon: best.0, upper: upper.max(best.0), k, argmax_i: best.1, argmax_x: best.2.cos() })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}
