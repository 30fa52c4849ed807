use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{self, centered, dyadic_exp_neg, frac};
use super::frequency::Frequency;
use super::orbit::Orbit;
use super::resonance::{find_resonances, resonance_exponent, Mode, ResonanceEntry, ResonanceSequence, ScanRange};
use crate::error::{invalid, Error, Result};

/// Scan limit used when measuring a phase without further guidance.
pub const DEFAULT_PHASE_SCAN: u64 = 200;
/// Default listing threshold ς for measured resonances, nats per site.
pub const DEFAULT_SIGMA: f64 = 0.2;

/// A phase θ ∈ [0, 1) with its measured resonance data.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    pub value: BigRational,
    pub resonances: ResonanceSequence,
    /// Finite-scan δ estimate over `delta_scan` (a lower bound for the limsup).
    pub delta_hat: f64,
    pub delta_argmax: i64,
    pub delta_scan: ScanRange,
    /// 2θ + kα ∈ ℤ for some scanned |k| (k = 0 included).
    pub excluded: bool,
}

impl Phase {
    /// Measure resonances with threshold `sigma` over |k| ≤ k_max and δ̂ over
    /// the dyadic tail of that range.
    pub fn measure(alpha: &Frequency, value: &BigRational, sigma: f64, k_max: u64) -> Result<Phase> {
        let value = frac(value);
        let two_theta = &value * BigRational::from_integer(2.into());
        let orbit = Orbit::new(&two_theta, alpha.value());
        let delta_scan = ScanRange::tail(k_max)?;
        let hit = (0..=k_max as i64).flat_map(|m| [m, -m]).find(|&k| orbit.is_integer(k));
        if let Some(k) = hit {
            return Ok(Phase {
                value,
                resonances: ResonanceSequence::empty(sigma),
                delta_hat: f64::INFINITY,
                delta_argmax: k,
                delta_scan,
                excluded: true,
            });
        }
        let (delta_hat, delta_argmax) = resonance_exponent(Mode::Delta, alpha, Some(&value), delta_scan)?;
        let resonances = find_resonances(alpha, &value, sigma, ScanRange::resonances(k_max)?)?;
        Ok(Phase { value, resonances, delta_hat: delta_hat.max(0.0), delta_argmax, delta_scan, excluded: false })
    }

    pub fn explicit(alpha: &Frequency, value: &BigRational) -> Result<Phase> {
        Self::measure(alpha, value, DEFAULT_SIGMA, DEFAULT_PHASE_SCAN)
    }

    pub fn to_f64(&self) -> f64 {
        exact::rational_to_f64(&self.value)
    }

    /// θ + mα, re-measured with the same settings. Resonances of the shifted
    /// phase sit at K − 2m.
    pub fn shifted(&self, alpha: &Frequency, m: i64) -> Result<Phase> {
        let v = &self.value + alpha.value() * BigRational::from_integer(m.into());
        Self::measure(alpha, &v, self.resonances.threshold, self.delta_scan.hi)
    }

    pub fn to_json(&self) -> PhaseJson {
        PhaseJson {
            num: self.value.numer().to_string(),
            den: self.value.denom().to_string(),
            resonances: self.resonances.entries.clone(),
            delta_hat: self.delta_hat,
            delta_scan: self.delta_scan,
            excluded: self.excluded,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhaseJson {
    pub num: String,
    pub den: String,
    pub resonances: Vec<ResonanceEntry>,
    pub delta_hat: f64,
    pub delta_scan: ScanRange,
    pub excluded: bool,
}

/// Build θ whose resonances sit at the requested offsets with strength
/// δ_target: ‖2θ + K_iα‖ = e^{−δK_i} up to the dyadic grid.
///
/// Corrections are applied smallest K first; each one may shift earlier
/// resonances, and is accepted only if every earlier strength stays within 10%
/// (in log scale) of its target. An empty list asks for a non-resonant phase.
pub fn construct_phase(alpha: &Frequency, delta: f64, ks: &[u64]) -> Result<Phase> {
    if !(delta > 0.0) {
        return Err(invalid("δ target must be positive"));
    }
    if ks.is_empty() {
        return non_resonant_phase(alpha);
    }
    if ks.windows(2).any(|w| w[1] <= w[0]) || ks[0] == 0 {
        return Err(invalid("resonance offsets must be positive and strictly increasing"));
    }
    let k_last = *ks.last().unwrap();
    if alpha.den() <= &BigInt::from(20 * k_last) {
        return Err(invalid(format!(
            "frequency denominator {} must exceed 20·max K = {}",
            alpha.den(),
            20 * k_last
        )));
    }
    for w in ks.windows(2) {
        let (a, b) = (w[0] as f64, w[1] as f64);
        // e^{−δb} < ¼ e^{−δa}/b
        if !(delta * (b - a) > (4.0 * b).ln()) {
            return Err(invalid(format!("offsets {} and {} too close for nested corrections at δ = {delta}", w[0], w[1])));
        }
    }

    let g = (delta * k_last as f64 / std::f64::consts::LN_2).ceil() as u32 + 64;
    let a = alpha.value();
    let kq = |k: u64| a * BigRational::from_integer(BigInt::from(k));
    let target_ln = |k: u64| -delta * k as f64;
    let within = |t: &BigRational, k: u64| {
        let ln = exact::ln_torus_norm(&(t + kq(k)));
        (ln - target_ln(k)).abs() <= 0.1 * delta * k as f64
    };

    // 2θ ≡ −K_1α + r_1
    let mut t = frac(&(-kq(ks[0]) + dyadic_exp_neg(delta * ks[0] as f64, g)));
    for (i, &k) in ks.iter().enumerate().skip(1) {
        let c = centered(&(&t + kq(k)));
        let r = dyadic_exp_neg(delta * k as f64, g);
        let mut best: Option<(f64, BigRational)> = None;
        for sign in [1i64, -1] {
            let cand = frac(&(&t - &c + &r * BigRational::from_integer(sign.into())));
            let worst = ks[..i]
                .iter()
                .map(|&kj| {
                    let ln = exact::ln_torus_norm(&(&cand + kq(kj)));
                    ((ln - target_ln(kj)) / (delta * kj as f64)).abs()
                })
                .fold(0.0, f64::max);
            if best.as_ref().map_or(true, |(w, _)| worst < *w) {
                best = Some((worst, cand));
            }
        }
        let (_, cand) = best.unwrap();
        if let Some(&kj) = ks[..i].iter().find(|&&kj| !within(&cand, kj)) {
            return Err(Error::ConstructionFailed { earlier: kj as i64, later: k as i64 });
        }
        t = cand;
    }
    for &k in ks {
        if !within(&t, k) {
            return Err(Error::ConstructionFailed { earlier: k as i64, later: k as i64 });
        }
    }
    let theta = &t / BigRational::from_integer(2.into());
    let k_max = (2 * k_last).max(20);
    Phase::measure(alpha, &theta, 0.8 * delta, k_max)
}

/// Deterministic search for θ with δ̂ ≤ 0.05 over |k| ≤ 200.
fn non_resonant_phase(alpha: &Frequency) -> Result<Phase> {
    // θ_j = frac(j·(√2 − 1)) on a 2^-60 grid: a low-discrepancy candidate stream
    let step = BigRational::new(BigInt::from(477_555_723_559_750_800u64), BigInt::one() << 60usize);
    let mut theta = BigRational::zero();
    for _ in 0..10_000 {
        theta = frac(&(&theta + &step));
        let ph = Phase::measure(alpha, &theta, DEFAULT_SIGMA, DEFAULT_PHASE_SCAN)?;
        if !ph.excluded && ph.delta_hat <= 0.05 {
            return Ok(ph);
        }
    }
    Err(invalid("no non-resonant phase found on the candidate stream"))
}

/// Is every requested offset present with strength within 10% of δ?
pub fn verify_construction(phase: &Phase, alpha: &Frequency, delta: f64, ks: &[u64]) -> Result<bool> {
    let orbit = Orbit::new(&(&phase.value * BigRational::from_integer(2.into())), alpha.value());
    Ok(ks.iter().all(|&k| {
        let s = -orbit.ln_norm(k as i64) / k as f64;
        (s - delta).abs() <= 0.1 * delta && s.is_finite() && s.is_sign_positive()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn single_resonance_construction() {
        let alpha = Frequency::golden(19).unwrap();
        let ph = construct_phase(&alpha, 0.5, &[20]).unwrap();
        assert!(verify_construction(&ph, &alpha, 0.5, &[20]).unwrap());
        assert!(!ph.excluded);
        assert!(ph.value.is_positive() || ph.value.is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        let alpha = Frequency::golden(19).unwrap();
        assert!(matches!(construct_phase(&alpha, 0.0, &[20]), Err(Error::InvalidArgument(_))));
        assert!(matches!(construct_phase(&alpha, 0.5, &[20, 10]), Err(Error::InvalidArgument(_))));
        let small = Frequency::golden(8).unwrap();
        assert!(matches!(construct_phase(&small, 0.5, &[20]), Err(Error::InvalidArgument(_))));
    }
}
