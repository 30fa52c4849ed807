//! The universal envelopes f (eigenfunctions) and g (transfer matrices), the
//! two-sided bound checks against measured profiles, and slope statistics.

mod density;

use std::io::Write;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{locate_x0_eta, Frequency, FrequencyJson, X0Eta, X0Table};
use crate::eigensolve::{fmt17, SolutionProfile};
use crate::error::{invalid, Result};
use crate::logdomain::logsumexp;
use crate::operator::TransferNorms;

pub use density::{density_stats, DensityStats, SlopeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    F,
    G,
}

/// log f(ℓ) from x0, η. Case 1 (x0ℓ ≤ 0): −|ℓ|ln λ. Case 2: the resonant
/// bump −(|x0| + |ℓ − x0|)ln λ + η|ℓ| added to −|ℓ|ln λ.
pub fn f_value(r: X0Eta, ln_lambda: f64, ell: i64) -> f64 {
    let l = ell.unsigned_abs() as f64;
    if r.x0 * ell <= 0 {
        return -l * ln_lambda;
    }
    let bump = -((r.x0.unsigned_abs() + (ell - r.x0).unsigned_abs()) as f64) * ln_lambda + r.eta * l;
    logsumexp(bump, -l * ln_lambda)
}

/// log g(ℓ). Case 1 (x0ℓ ≤ 0 or |x0| > |ℓ|): |ℓ|ln λ. Case 2 (|x0| ≤ |ℓ| ≤ 2|x0|):
/// (ln λ − η)|ℓ| ⊕ |2x0 − ℓ|ln λ. Case 3 (|ℓ| > 2|x0|): (ln λ − η)|ℓ|.
pub fn g_value(r: X0Eta, ln_lambda: f64, ell: i64) -> f64 {
    let l = ell.unsigned_abs();
    let x = r.x0.unsigned_abs();
    if r.x0 * ell <= 0 || x > l {
        return l as f64 * ln_lambda;
    }
    let dipped = (ln_lambda - r.eta) * l as f64;
    if l <= 2 * x {
        logsumexp(dipped, (2 * r.x0 - ell).unsigned_abs() as f64 * ln_lambda)
    } else {
        dipped
    }
}

pub fn f_model(alpha: &Frequency, theta: &BigRational, ln_lambda: f64, ell: i64) -> Result<f64> {
    Ok(f_value(locate_x0_eta(alpha, theta, ell)?, ln_lambda, ell))
}

pub fn g_model(alpha: &Frequency, theta: &BigRational, ln_lambda: f64, ell: i64) -> Result<f64> {
    Ok(g_value(locate_x0_eta(alpha, theta, ell)?, ln_lambda, ell))
}

/// f or g tabulated on 1 ≤ |ℓ| ≤ max_ell for a fixed (α, θ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeModel {
    pub kind: EnvelopeKind,
    pub ln_lambda: f64,
    pub max_ell: i64,
    /// x0/η per ℓ, indexed from ℓ = −max_ell (ℓ = 0 holds x0 = 0, η = 0).
    pub x0_eta: Vec<X0Eta>,
    pub log_values: Vec<f64>,
    pub source: ModelSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSource {
    pub alpha: FrequencyJson,
    pub theta_num: String,
    pub theta_den: String,
}

impl EnvelopeModel {
    pub fn new(kind: EnvelopeKind, alpha: &Frequency, theta: &BigRational, ln_lambda: f64, max_ell: i64) -> Result<Self> {
        if max_ell < 1 {
            return Err(invalid("model range must contain some ℓ ≠ 0"));
        }
        let table = X0Table::new(alpha, theta, max_ell as u64)?;
        let mut x0_eta = Vec::with_capacity(2 * max_ell as usize + 1);
        let mut log_values = Vec::with_capacity(2 * max_ell as usize + 1);
        for ell in -max_ell..=max_ell {
            if ell == 0 {
                x0_eta.push(X0Eta { x0: 0, eta: 0.0, integer_hit: false });
                log_values.push(0.0);
                continue;
            }
            let r = table.get(ell);
            x0_eta.push(r);
            log_values.push(match kind {
                EnvelopeKind::F => f_value(r, ln_lambda, ell),
                EnvelopeKind::G => g_value(r, ln_lambda, ell),
            });
        }
        let source = ModelSource {
            alpha: alpha.to_json(),
            theta_num: theta.numer().to_string(),
            theta_den: theta.denom().to_string(),
        };
        Ok(EnvelopeModel { kind, ln_lambda, max_ell, x0_eta, log_values, source })
    }

    pub fn get(&self, ell: i64) -> f64 {
        self.log_values[(ell + self.max_ell) as usize]
    }

    pub fn x0_eta(&self, ell: i64) -> X0Eta {
        self.x0_eta[(ell + self.max_ell) as usize]
    }
}

/// A measured log-magnitude series indexed by ℓ ∈ [lo, lo + len).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogSeries {
    pub lo: i64,
    pub values: Vec<f64>,
}

impl LogSeries {
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, ell: i64) -> f64 {
        self.values[(ell - self.lo) as usize]
    }

    pub fn contains(&self, ell: i64) -> bool {
        self.lo <= ell && ell <= self.hi()
    }
}

impl From<&SolutionProfile> for LogSeries {
    /// logU with ℓ measured from the profile anchor.
    fn from(p: &SolutionProfile) -> Self {
        LogSeries { lo: p.lo - p.anchor, values: p.log_u.clone() }
    }
}

impl From<&TransferNorms> for LogSeries {
    fn from(t: &TransferNorms) -> Self {
        LogSeries { lo: -t.n, values: t.log_norm.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub verdict: bool,
    pub epsilon: f64,
    /// Checked sites K ≤ |ℓ| ≤ N.
    pub window: (i64, i64),
    pub ells: Vec<i64>,
    /// model + ε|ℓ| − measured
    pub upper: Vec<f64>,
    /// measured − (model − ε|ℓ|)
    pub lower: Vec<f64>,
    pub worst_upper_slack: f64,
    pub worst_lower_slack: f64,
}

impl BoundReport {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "epsilon": self.epsilon,
            "window": self.window,
            "worst_upper_slack": self.worst_upper_slack,
            "worst_lower_slack": self.worst_lower_slack,
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["ell", "upper_slack", "lower_slack"])?;
        for ((l, u), d) in self.ells.iter().zip(&self.upper).zip(&self.lower) {
            wr.write_record([l.to_string(), fmt17(*u), fmt17(*d)])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Two-sided check model − ε|ℓ| ≤ measured ≤ model + ε|ℓ| on K ≤ |ℓ| ≤ N.
pub fn verify_bounds(measured: &LogSeries, model: &EnvelopeModel, epsilon: f64, k_on: i64, n: i64) -> Result<BoundReport> {
    if k_on < 1 || n < k_on {
        return Err(invalid(format!("need 1 ≤ K ≤ N, got K = {k_on}, N = {n}")));
    }
    if n > model.max_ell || !measured.contains(-n) || !measured.contains(n) {
        return Err(invalid(format!("window |ℓ| ≤ {n} not covered by the measurement and the model")));
    }
    let mut ells = Vec::new();
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for ell in (-n..=-k_on).chain(k_on..=n) {
        let m = model.get(ell);
        let x = measured.get(ell);
        let e = epsilon * ell.unsigned_abs() as f64;
        ells.push(ell);
        upper.push(m + e - x);
        lower.push(x - (m - e));
    }
    let wu = upper.iter().copied().fold(f64::INFINITY, f64::min);
    let wl = lower.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BoundReport {
        verdict: wu >= 0.0 && wl >= 0.0,
        epsilon,
        window: (k_on, n),
        ells,
        upper,
        lower,
        worst_upper_slack: wu,
        worst_lower_slack: wl,
    })
}
