//! Fast internal consistency checks against closed forms (no external
//! oracle crates; those live in the integration tests).

use num_bigint::BigInt;
use serde::Serialize;

use crate::arithmetic::{construct_phase, Frequency};
use crate::eigensolve::{box_eigenvalues_f64, BoxSpec};
use crate::error::Result;
use crate::operator::{transfer_product, OperatorParams};
use crate::real::XReal;

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> SelfCheck {
    SelfCheck { name, value, tolerance, pass: value.is_finite() && value <= tolerance }
}

pub fn selftest() -> Result<Vec<SelfCheck>> {
    let mut out = Vec::new();

    // golden convergent denominators are Fibonacci numbers
    let alpha = Frequency::golden_with_denominator(10_000)?;
    let qs: Vec<&BigInt> = alpha.convergents().iter().map(|c| &c.1).collect();
    // the canonical expansion ends in a 2, which breaks the last step
    let bad = qs[..qs.len() - 1].windows(3).filter(|w| *w[2] != w[0] + w[1]).count() as f64;
    out.push(check("golden_fibonacci_denominators", bad, 0.0));

    // unimodularity (cancellation budget: 2·ln‖A‖ well below the mantissa)
    // and the cocycle identity, in both precisions
    let theta = construct_phase(&alpha, 0.5, &[20])?;
    let params = OperatorParams::new(0.5, alpha.clone(), theta.clone())?.with_energy_f64(0.3);
    let m = transfer_product::<XReal>(&params, 100, -50);
    out.push(check("det_log_xreal", m.det_log().abs(), 1e-12));
    let left = transfer_product::<XReal>(&params, 20, 30);
    let right = transfer_product::<XReal>(&params, 80, -50);
    let (dist, signs) = m.log_distance(&left.mul(&right), 60.0);
    out.push(check("cocycle_split", if signs { dist } else { f64::INFINITY }, 1e-30));
    let f = transfer_product::<f64>(&params, 40, 0);
    let x = transfer_product::<XReal>(&params, 40, 0);
    out.push(check("f64_vs_xreal_norm", (f.norm_log() - x.norm_log()).abs(), 1e-9));

    // near-free box: eigenvalues 2cos(πj/(N+1)) up to the potential size
    let free = OperatorParams::new(-40.0, alpha, theta)?;
    let n = 60;
    let ev = box_eigenvalues_f64(&free, BoxSpec::new(1, n)?, (-3.0, 3.0))?;
    let mut exact: Vec<f64> = (1..=n).map(|j| 2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos()).collect();
    exact.sort_by(f64::total_cmp);
    let err = if ev.len() == exact.len() {
        ev.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    out.push(check("free_box_spectrum", err, 1e-12));

    Ok(out)
}
