use serde::{Deserialize, Serialize};

use super::{regularity_check, OperatorParams};
use crate::eigensolve::SolutionProfile;
use crate::error::{invalid, Error, Result};

/// How the regularity hypothesis on the interior of a block is established.
#[derive(Debug, Clone, Copy)]
pub enum Hypothesis<'a> {
    /// Certify every interior site with `regularity_check` at the profile energy.
    Verify(&'a OperatorParams),
    /// Take it as given (synthetic profiles).
    Assume,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub holds: bool,
    /// min over tested y of (bound − ln r_y), nats.
    pub margin: f64,
    pub worst_site: i64,
    pub tested: (i64, i64),
    pub hypothesis_verified: bool,
}

/// With k = y2 − y1 and r_y = max_{|t| ≤ 10γk} |φ(y + t)| (clipped to the
/// profile window), check on y ∈ [y1 + 10γk, y2 − 10γk] that
/// |φ(y)| ≤ max_i r_{y_i} e^{−τ(|y − y_i| − 3γk)}.
///
/// The left side is the pointwise value: with r_y there, the window of the
/// first tested site already contains y1 and the bound cannot hold.
pub fn block_bound_check(
    profile: &SolutionProfile,
    y1: i64,
    y2: i64,
    tau: f64,
    gamma: f64,
    hypothesis: Hypothesis<'_>,
) -> Result<BlockReport> {
    let k = y2 - y1;
    if k < 100 {
        return Err(invalid(format!("block length y2 − y1 = {k} must be ≥ 100")));
    }
    if !(tau > 0.0 && gamma > 0.0) {
        return Err(invalid("τ and γ must be positive"));
    }
    if !profile.contains(y1) || !profile.contains(y2) {
        return Err(invalid(format!("block [{y1}, {y2}] outside the profile window")));
    }
    let gk = gamma * k as f64;
    let reach = (10.0 * gk).floor() as i64;
    let (t_lo, t_hi) = (y1 + (10.0 * gk).ceil() as i64, y2 - (10.0 * gk).ceil() as i64);
    if t_lo > t_hi {
        return Err(invalid("10γk ≥ k/2: nothing to test"));
    }

    let verified = match hypothesis {
        Hypothesis::Assume => false,
        Hypothesis::Verify(params) => {
            let at_e = params.clone().with_energy(profile.energy.clone());
            let (lo, hi) = (y1 + gk.ceil() as i64, y2 - gk.ceil() as i64);
            for y in lo..=hi {
                if !certify_site(&at_e, y, y1, y2, tau, gk)? {
                    return Err(Error::UnverifiedHypothesis { y });
                }
            }
            true
        }
    };

    let log_r = |y: i64| -> f64 {
        ((y - reach).max(profile.lo)..=(y + reach).min(profile.hi))
            .map(|n| profile.logmag_phi[(n - profile.lo) as usize])
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (r1, r2) = (log_r(y1), log_r(y2));
    let mut margin = f64::INFINITY;
    let mut worst = t_lo;
    for y in t_lo..=t_hi {
        let bound = (r1 - tau * ((y - y1) as f64 - 3.0 * gk)).max(r2 - tau * ((y2 - y) as f64 - 3.0 * gk));
        let slack = bound - profile.logmag_phi[(y - profile.lo) as usize];
        if slack < margin {
            margin = slack;
            worst = y;
        }
    }
    Ok(BlockReport { holds: margin >= 0.0, margin, worst_site: worst, tested: (t_lo, t_hi), hypothesis_verified: verified })
}

/// Some k1 with γk/20 < k1 ≤ ½ min(y − y1, y2 − y) and k1 ≥ 40 making y
/// (τ, k1)-regular.
fn certify_site(params: &OperatorParams, y: i64, y1: i64, y2: i64, tau: f64, gk: f64) -> Result<bool> {
    let lo = ((gk / 20.0).floor() as i64 + 1).max(40);
    let hi = (y - y1).min(y2 - y) / 2;
    let mut k1 = lo;
    while k1 <= hi {
        if regularity_check::<f64>(params, y, tau, k1)?.regular {
            return Ok(true);
        }
        k1 += 20;
    }
    Ok(false)
}
