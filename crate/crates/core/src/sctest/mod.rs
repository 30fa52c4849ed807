//! Diagnostics for the regime 1 < λ < e^δ: palindromic reflections
//! u_i(n) = u(k − n), near-constant Wronskians and the mass transport
//! ‖Φ(0)‖ ≈ ‖Φ(k + 1)‖ that rules out ℓ² eigenfunctions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::ResonanceSequence;
use crate::eigensolve::{box_eigenvalues_f64, eigenvector_profile, BoxSpec, SolutionProfile};
use crate::error::{invalid, Error, Result};
use crate::logdomain::SignedLog;
use crate::operator::{potential_value, OperatorParams};
use crate::real::XReal;

/// W(n) = u(n+1)v(n) − u(n)v(n+1) for every n with n, n + 1 in both windows.
/// Values outside a window count as zero only through `phi_or_zero`, so the
/// result is exact for Dirichlet box vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianProfile {
    pub lo: i64,
    pub values: Vec<SignedLog>,
}

impl WronskianProfile {
    pub fn sup_log(&self) -> f64 {
        self.values.iter().map(|w| w.log).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn at(&self, n: i64) -> SignedLog {
        self.values[(n - self.lo) as usize]
    }
}

pub fn wronskian_profile(u: &SolutionProfile, v: &SolutionProfile) -> Result<WronskianProfile> {
    let lo = u.lo.max(v.lo);
    let hi = u.hi.min(v.hi) - 1;
    if hi < lo {
        return Err(invalid("profiles overlap on fewer than two sites"));
    }
    let values = (lo..=hi)
        .map(|n| {
            let a = u.phi(n + 1).mul(&v.phi(n));
            let b = u.phi(n).mul(&v.phi(n + 1));
            // SignedLog::sub works at the larger of the two scales
            a.sub(&b)
        })
        .collect();
    Ok(WronskianProfile { lo, values })
}

/// u(k − n) on [k − hi, k − lo]; sites beyond the window are taken as zero,
/// which is exact for box eigenvectors.
pub fn reflect(u: &SolutionProfile, k: i64) -> SolutionProfile {
    let (lo, hi) = (k - u.hi, k - u.lo);
    let phi: Vec<SignedLog> = (lo - 1..=hi).map(|n| u.phi_or_zero(k - n)).collect();
    let mut r = SolutionProfile::from_phi(lo, &phi, u.energy.clone());
    r.residual = u.residual;
    r
}

/// ℓ²-normalised copy (Σφ² = 1 over the window); logU is shifted alike.
pub fn l2_normalized(u: &SolutionProfile) -> SolutionProfile {
    let s = u.log_l2_norm();
    let mut p = u.clone();
    p.logmag_phi.iter_mut().for_each(|v| *v -= s);
    p.log_u.iter_mut().for_each(|v| *v -= s);
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Which of Φ(m) ± Φ_i(m) is the small one at the reflection midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Sum,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Midpoint {
    pub parity: Parity,
    /// m = k/2 (even) or m̃ + 1 = (k + 1)/2 (odd).
    pub site: i64,
    pub sum_norm: f64,
    pub diff_norm: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PalindromeVerdict {
    pub k: i64,
    /// max_n |V(n) − V(k − n)| over the window and its Lipschitz bound.
    pub potential_mismatch: f64,
    pub mismatch_bound: f64,
    /// For the ℓ²-normalised vector.
    pub wronskian_sup: f64,
    /// e^{−(δ − ε)|k|}.
    pub scale: f64,
    /// wronskian_sup / scale: the constant C this instance needs.
    pub c_needed: f64,
    pub midpoint: Midpoint,
    pub phi0_norm: f64,
    /// |‖Φ(0)‖ − ‖Φ(k + 1)‖|, Φ(n) = (u(n), u(n − 1)).
    pub transport_gap: f64,
}

impl PalindromeVerdict {
    pub fn relative_gap(&self) -> f64 {
        self.transport_gap / self.phi0_norm
    }
}

fn phi_norm(u: &SolutionProfile, n: i64) -> f64 {
    let a = u.phi_or_zero(n).to_f64();
    let b = u.phi_or_zero(n - 1).to_f64();
    a.hypot(b)
}

pub fn palindrome_test(
    params: &OperatorParams,
    eigvec: &SolutionProfile,
    k: i64,
    delta: f64,
    epsilon: f64,
) -> Result<PalindromeVerdict> {
    let (need_lo, need_hi) = (k.min(0) - 10, k.max(0) + 10);
    if !(eigvec.contains(need_lo) && eigvec.contains(need_hi)) {
        return Err(invalid(format!(
            "eigenvector window [{}, {}] does not cover [{need_lo}, {need_hi}]",
            eigvec.lo, eigvec.hi
        )));
    }
    let scale = (-(delta - epsilon) * k.unsigned_abs() as f64).exp();
    let mismatch_bound = params.lipschitz() * scale;
    let potential_mismatch = eigvec
        .sites()
        .map(|n| (potential_value(params, n) - potential_value(params, k - n)).abs())
        .fold(0.0, f64::max);
    if potential_mismatch > mismatch_bound {
        return Err(Error::NotAResonance { k, mismatch: potential_mismatch, bound: mismatch_bound });
    }

    let u = l2_normalized(eigvec);
    let ui = reflect(&u, k);
    let w = wronskian_profile(&u, &ui)?;
    let wronskian_sup = w.sup_log().exp();

    let (parity, m) = if k.rem_euclid(2) == 0 { (Parity::Even, k / 2) } else { (Parity::Odd, (k + 1).div_euclid(2)) };
    let val = |n: i64| u.phi_or_zero(n).to_f64();
    let phi = [val(m), val(m - 1)];
    let phi_i = [val(k - m), val(k - m + 1)];
    let sum_norm = (phi[0] + phi_i[0]).hypot(phi[1] + phi_i[1]);
    let diff_norm = (phi[0] - phi_i[0]).hypot(phi[1] - phi_i[1]);
    let branch = if sum_norm < diff_norm { Branch::Sum } else { Branch::Difference };

    let phi0_norm = phi_norm(&u, 0);
    let transport_gap = (phi0_norm - phi_norm(&u, k + 1)).abs();
    Ok(PalindromeVerdict {
        k,
        potential_mismatch,
        mismatch_bound,
        wronskian_sup,
        scale,
        c_needed: wronskian_sup / scale,
        midpoint: Midpoint { parity, site: m, sum_norm, diff_norm, branch },
        phi0_norm,
        transport_gap,
    })
}

/// Least-squares slopes of logU against the distance from the profile anchor,
/// on each side over the outer half of a radius-`radius` window:
/// radius/2 ≤ |n − anchor| ≤ radius, clipped to the profile. A side with
/// fewer than 10 sites is `None`.
pub fn outer_decay_slopes(u: &SolutionProfile, radius: i64) -> (Option<f64>, Option<f64>) {
    let c = u.anchor;
    let fit = |lo: i64, hi: i64| {
        let (lo, hi) = (lo.max(u.lo), hi.min(u.hi));
        if hi - lo + 1 < 10 {
            return None;
        }
        let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| ((n - c).abs() as f64, u.log_u_at(n))).collect();
        let nf = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / nf, a.1 + p.1 / nf));
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    };
    let h = (radius + 1) / 2;
    (fit(c - radius, c - h), fit(c + h, c + radius))
}

/// Exponential-decay test: every available side has slope ≤ −rate, and at
/// least one side is available.
pub fn decays(slopes: (Option<f64>, Option<f64>), rate: f64) -> bool {
    let s = [slopes.0, slopes.1];
    s.iter().any(|x| x.is_some()) && s.iter().flatten().all(|&x| x <= -rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScOptions {
    /// Box [⌊k/2⌋ − N, k − ⌊k/2⌋ + N] around the reflection centre of the
    /// first resonance.
    pub half_width: i64,
    /// Fraction of eigenvalues kept, from the middle of the box spectrum.
    pub bulk_fraction: f64,
    pub epsilon: f64,
    /// Near-symmetric transport: gap ≤ threshold·‖Φ(0)‖.
    pub gap_threshold: f64,
    /// Wronskian pass: wronskian_sup ≤ c_max·e^{−(δ−ε)|k|}.
    pub c_max: f64,
    /// Exponential-decay test: outer slopes ≤ −decay_slope, window radius
    /// `half_width` around each eigenvector's anchor.
    pub decay_slope: f64,
    /// Evenly spaced subsample of the bulk (all when `None`).
    pub max_eigenvectors: Option<usize>,
}

impl Default for ScOptions {
    fn default() -> Self {
        ScOptions { half_width: 400, bulk_fraction: 0.8, epsilon: 0.1, gap_threshold: 0.2, c_max: 10.0, decay_slope: 0.2, max_eigenvectors: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub energy: f64,
    pub anchor: i64,
    pub verdicts: Vec<PalindromeVerdict>,
    pub decay_slopes: (Option<f64>, Option<f64>),
    pub decays: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScReport {
    pub box_spec: BoxSpec,
    pub delta: f64,
    pub ln_lambda: f64,
    pub tested: usize,
    pub failed_eigenvectors: usize,
    /// Per resonance: fraction of eigenvectors with wronskian_sup ≤ c_max·scale
    /// and transport gap ≤ threshold·‖Φ(0)‖.
    pub pass_fraction: Vec<(i64, f64)>,
    /// Same, restricted to eigenvectors anchored in [min(0, k) − 10,
    /// max(0, k) + 10]: (k, count, fraction).
    pub near_resonance: Vec<(i64, usize, f64)>,
    /// Per resonance: the 80th percentile of c_needed.
    pub c_fit: Vec<(i64, f64)>,
    pub decaying: usize,
    pub records: Vec<EigenRecord>,
}

/// Palindrome and decay diagnostics for every bulk eigenvector of a box
/// symmetric about K₁/2, in the regime ln λ < δ.
pub fn sc_transport_check(params: &OperatorParams, resonances: &ResonanceSequence, delta: f64, opts: ScOptions) -> Result<ScReport> {
    if params.ln_lambda >= delta {
        return Err(Error::InvalidRegime { ln_lambda: params.ln_lambda, delta_hat: delta });
    }
    palindrome_survey(params, resonances, delta, opts)
}

/// The same survey without the regime guard (used for comparisons across
/// the phase diagram).
pub fn palindrome_survey(params: &OperatorParams, resonances: &ResonanceSequence, delta: f64, opts: ScOptions) -> Result<ScReport> {
    if opts.half_width < 20 || !(0.0 < opts.bulk_fraction && opts.bulk_fraction <= 1.0) {
        return Err(invalid("need half_width ≥ 20 and bulk fraction in (0, 1]"));
    }
    let k1 = resonances.entries.iter().find(|e| e.strength >= delta - opts.epsilon).map_or(0, |e| e.k);
    let a = k1.div_euclid(2) - opts.half_width;
    let bx = BoxSpec::new(a, k1 - a)?;
    // only δ-resonances: weaker sites would trip the potential-mismatch guard
    let ks: Vec<i64> = resonances
        .entries
        .iter()
        .filter(|e| e.strength >= delta - opts.epsilon)
        .map(|e| e.k)
        .filter(|&k| bx.a <= k.min(0) - 10 && k.max(0) + 10 <= bx.b)
        .collect();

    let all = box_eigenvalues_f64(params, bx, (f64::NEG_INFINITY, f64::INFINITY))?;
    let drop = ((1.0 - opts.bulk_fraction) / 2.0 * all.len() as f64).floor() as usize;
    let mut bulk: Vec<f64> = all[drop..all.len() - drop].to_vec();
    if let Some(m) = opts.max_eigenvectors {
        if m >= 1 && bulk.len() > m {
            let step = bulk.len() as f64 / m as f64;
            bulk = (0..m).map(|i| bulk[(i as f64 * step) as usize]).collect();
        }
    }
    let bits = params.precision_bits;

    let outcomes: Vec<Result<EigenRecord>> = bulk
        .par_iter()
        .map(|&e| {
            let prof = eigenvector_profile(params, bx, &XReal::from_f64(e, bits))?;
            let verdicts = ks.iter().map(|&k| palindrome_test(params, &prof, k, delta, opts.epsilon)).collect::<Result<Vec<_>>>()?;
            let slopes = outer_decay_slopes(&prof, opts.half_width);
            Ok(EigenRecord {
                energy: prof.energy.to_f64(),
                anchor: prof.anchor,
                verdicts,
                decay_slopes: slopes,
                decays: decays(slopes, opts.decay_slope),
            })
        })
        .collect();
    let failed_eigenvectors = outcomes.iter().filter(|r| r.is_err()).count();
    let records: Vec<EigenRecord> = outcomes.into_iter().filter_map(|r| r.ok()).collect();
    let tested = records.len();

    let mut pass_fraction = Vec::new();
    let mut c_fit = Vec::new();
    let mut near_resonance = Vec::new();
    for (j, &k) in ks.iter().enumerate() {
        let ok = |r: &EigenRecord| {
            let v = &r.verdicts[j];
            v.c_needed <= opts.c_max && v.relative_gap() <= opts.gap_threshold
        };
        let pass = records.iter().filter(|r| ok(r)).count();
        pass_fraction.push((k, pass as f64 / bulk.len().max(1) as f64));
        let near: Vec<&EigenRecord> =
            records.iter().filter(|r| k.min(0) - 10 <= r.anchor && r.anchor <= k.max(0) + 10).collect();
        let near_pass = near.iter().filter(|r| ok(r)).count();
        near_resonance.push((k, near.len(), near_pass as f64 / near.len().max(1) as f64));
        let mut cs: Vec<f64> = records.iter().map(|r| r.verdicts[j].c_needed).collect();
        cs.sort_by(f64::total_cmp);
        let q = cs.get(((0.8 * cs.len() as f64).ceil() as usize).saturating_sub(1)).copied().unwrap_or(f64::NAN);
        c_fit.push((k, q));
    }
    Ok(ScReport {
        box_spec: bx,
        delta,
        ln_lambda: params.ln_lambda,
        tested,
        failed_eigenvectors,
        pass_fraction,
        near_resonance,
        c_fit,
        decaying: records.iter().filter(|r| r.decays).count(),
        records,
    })
}
