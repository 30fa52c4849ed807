use serde::{Deserialize, Serialize};

use super::LogSeries;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeKind {
    /// slope_k = −logU(k)/k
    Decay,
    /// slope_k = log‖A_k‖/k
    Growth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityStats {
    pub limsup_slope: f64,
    pub liminf_slope: f64,
    /// Sites over which the liminf was taken.
    pub liminf_sites: Vec<i64>,
    pub exceptional_density: f64,
    /// ½ for eigenfunctions, 0 for transfer matrices.
    pub predicted_density: f64,
    pub window: (i64, i64),
    pub epsilon: f64,
}

/// Slopes on k ∈ [K, N] (k > 0). limsup/liminf are the max/min over the
/// dyadic tail [⌈N/2⌉, N] unless `liminf_sites` names where to take the
/// liminf (e.g. the measured resonance sites). The exceptional density is the
/// fraction of k ∈ [K, N] with |slope_k − ln λ| > ε.
pub fn density_stats(
    series: &LogSeries,
    kind: SlopeKind,
    k_on: i64,
    n: i64,
    ln_lambda: f64,
    epsilon: f64,
    liminf_sites: Option<&[i64]>,
) -> Result<DensityStats> {
    if k_on < 1 || n < 10 * k_on {
        return Err(invalid(format!("need N ≥ 10K, got K = {k_on}, N = {n}")));
    }
    if !series.contains(k_on) || !series.contains(n) {
        return Err(invalid("series does not cover [K, N]"));
    }
    let slope = |k: i64| match kind {
        SlopeKind::Decay => -series.get(k) / k as f64,
        SlopeKind::Growth => series.get(k) / k as f64,
    };
    let tail = (n + 1) / 2..=n;
    let limsup = tail.clone().map(slope).fold(f64::NEG_INFINITY, f64::max);
    let sites: Vec<i64> = match liminf_sites {
        Some(s) => {
            if let Some(&bad) = s.iter().find(|&&k| k < 1 || !series.contains(k)) {
                return Err(invalid(format!("liminf site {bad} outside the series")));
            }
            s.to_vec()
        }
        None => tail.collect(),
    };
    let liminf = sites.iter().map(|&k| slope(k)).fold(f64::INFINITY, f64::min);
    let bad = (k_on..=n).filter(|&k| (slope(k) - ln_lambda).abs() > epsilon).count();
    Ok(DensityStats {
        limsup_slope: limsup,
        liminf_slope: liminf,
        liminf_sites: sites,
        exceptional_density: bad as f64 / (n - k_on + 1) as f64,
        predicted_density: match kind {
            SlopeKind::Decay => 0.5,
            SlopeKind::Growth => 0.0,
        },
        window: (k_on, n),
        epsilon,
    })
}
