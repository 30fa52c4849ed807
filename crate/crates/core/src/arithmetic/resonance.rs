use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::frequency::Frequency;
use super::orbit::Orbit;
use crate::error::{invalid, Error, Result};

/// Smallest |k| considered by default when listing phase resonances. Below
/// this, ‖2θ + kα‖ ≤ 1/2 makes every k look "resonant" at rates ≥ ln2/|k|.
pub const DEFAULT_MIN_RESONANCE: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Beta,
    Delta,
}

/// Offsets scanned: lo ≤ |k| ≤ hi, both signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRange {
    pub lo: u64,
    pub hi: u64,
}

impl ScanRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(invalid(format!("scan range [{lo}, {hi}] must satisfy 1 ≤ lo ≤ hi")));
        }
        Ok(ScanRange { lo, hi })
    }

    /// Every offset 1 ≤ |k| ≤ k_max.
    pub fn full(k_max: u64) -> Result<Self> {
        Self::new(1, k_max)
    }

    /// The dyadic tail ⌈k_max/2⌉ ≤ |k| ≤ k_max: the finite-scan stand-in for a limsup.
    pub fn tail(k_max: u64) -> Result<Self> {
        Self::new(k_max.div_ceil(2).max(1), k_max)
    }

    /// Default window for listing resonances: DEFAULT_MIN_RESONANCE ≤ |k| ≤ k_max.
    pub fn resonances(k_max: u64) -> Result<Self> {
        Self::new(DEFAULT_MIN_RESONANCE.min(k_max).max(1), k_max)
    }

    /// Scan order: increasing |k|, positive before negative.
    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        (self.lo as i64..=self.hi as i64).flat_map(|m| [m, -m])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceEntry {
    pub k: i64,
    /// −ln‖2θ + kα‖/|k|, nats per site.
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSequence {
    pub entries: Vec<ResonanceEntry>,
    /// ς, nats per site.
    pub threshold: f64,
    /// Largest c with |K_i| ≥ c·e^{c|K_{i−1}|} for all consecutive entries.
    pub gap_constant: Option<f64>,
}

impl ResonanceSequence {
    pub fn empty(threshold: f64) -> Self {
        ResonanceSequence { entries: Vec::new(), threshold, gap_constant: None }
    }

    pub fn positions(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.k).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Finite-scan estimate of β(α) or δ(α, θ): the largest −ln‖·‖/|k| over the
/// scan range, with its maximiser (first in scan order on ties). Reported
/// values are lower bounds for the limsup over the given range only.
pub fn resonance_exponent(
    mode: Mode,
    alpha: &Frequency,
    theta: Option<&BigRational>,
    range: ScanRange,
) -> Result<(f64, i64)> {
    let orbit = match (mode, theta) {
        (Mode::Beta, _) => Orbit::new(&BigRational::from_integer(0.into()), alpha.value()),
        (Mode::Delta, Some(t)) => Orbit::new(&(t * BigRational::from_integer(2.into())), alpha.value()),
        (Mode::Delta, None) => return Err(invalid("delta mode needs a phase")),
    };
    let mut best = (f64::NEG_INFINITY, 0i64);
    for k in range.offsets() {
        let ln = orbit.ln_norm(k);
        if ln == f64::NEG_INFINITY {
            return Err(match mode {
                Mode::Delta => Error::DegeneratePhase { k },
                Mode::Beta => invalid(format!("‖{k}α‖ = 0: frequency denominator inside scan range")),
            });
        }
        let s = -ln / k.unsigned_abs() as f64;
        if s > best.0 {
            best = (s, k);
        }
    }
    Ok(best)
}

/// All k in the range with ‖2θ + kα‖ ≤ e^{−ς|k|}, sorted by |k|.
pub fn find_resonances(
    alpha: &Frequency,
    theta: &BigRational,
    sigma: f64,
    range: ScanRange,
) -> Result<ResonanceSequence> {
    if !(sigma > 0.0) {
        return Err(invalid("threshold ς must be positive"));
    }
    let orbit = Orbit::new(&(theta * BigRational::from_integer(2.into())), alpha.value());
    let mut entries = Vec::new();
    for k in range.offsets() {
        let ln = orbit.ln_norm(k);
        if ln == f64::NEG_INFINITY {
            return Err(Error::DegeneratePhase { k });
        }
        let s = -ln / k.unsigned_abs() as f64;
        if s >= sigma {
            entries.push(ResonanceEntry { k, strength: s });
        }
    }
    let gap_constant = fit_gap_constant(&entries);
    Ok(ResonanceSequence { entries, threshold: sigma, gap_constant })
}

/// Largest c > 0 with b ≥ c·e^{c·a} for every consecutive pair (a, b) of |K|'s.
pub fn fit_gap_constant(entries: &[ResonanceEntry]) -> Option<f64> {
    if entries.len() < 2 {
        return None;
    }
    let mut c_all = f64::INFINITY;
    for w in entries.windows(2) {
        let a = w[0].k.unsigned_abs() as f64;
        let b = w[1].k.unsigned_abs() as f64;
        // c·e^{ca} is increasing in c; bisect c·e^{ca} = b
        let (mut lo, mut hi) = (0.0f64, b.max(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * (mid * a).exp() <= b {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        c_all = c_all.min(lo);
    }
    Some(c_all)
}
