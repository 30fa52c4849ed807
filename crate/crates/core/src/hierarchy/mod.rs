//! Reflective hierarchy of eigenfunction maxima: local K-maxima near
//! k₀ + K_{j₀} − K_{j₁} + …, and the alternating-reflection similarity of the
//! profile around each of them to the universal envelope f.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::arithmetic::ResonanceSequence;
use crate::asymptotics::EnvelopeModel;
use crate::eigensolve::{fmt17, SolutionProfile};
use crate::error::{invalid, Error, Result};

/// Default absolute floor C₀ (nats) in the similarity test and the default
/// constant C in the admissible range C·K̂^d ≤ |x|.
pub const DEFAULT_C0: f64 = 3.0;
pub const DEFAULT_C_RANGE: f64 = 3.0;

/// Local K-maxima in [lo, hi]: logU(b) ≥ logU(b + t) for all |t| ≤ K. On a
/// plateau only the leftmost site is reported.
pub fn local_k_maxima(profile: &SolutionProfile, k: i64, search: (i64, i64)) -> Result<Vec<i64>> {
    if k < 1 {
        return Err(invalid("K must be ≥ 1"));
    }
    let (lo, hi) = search;
    if lo - k < profile.lo || hi + k > profile.hi {
        return Err(invalid(format!(
            "search window [{lo}, {hi}] ± {k} leaves the profile window [{}, {}]",
            profile.lo, profile.hi
        )));
    }
    Ok((lo..=hi).filter(|&b| is_local_max(profile, b, k)).collect())
}

/// The local-maximum predicate with leftmost plateau tie-breaking.
pub fn is_local_max(profile: &SolutionProfile, b: i64, k: i64) -> bool {
    let v = profile.log_u_at(b);
    (1..=k).all(|t| profile.log_u_at(b - t) < v && profile.log_u_at(b + t) <= v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMaximum {
    pub position: i64,
    /// Detection window K.
    pub window: i64,
    pub depth: usize,
    /// Indices into the resonance sequence, outermost first.
    pub index_path: Vec<usize>,
    pub predicted: i64,
    pub deviation: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Found,
    NotFound,
    /// Predicted position (with search radius and window) outside the profile.
    Untestable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    /// Admissible C·K̂^d ≤ |x| ≤ ς/(4 ln λ)·|K_{j_s}|; `None` when empty.
    pub range: Option<(i64, i64)>,
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVerdict {
    PredictedWins,
    OtherWins,
    /// f(x) and f(−x) agree to within C₀ on the whole test range.
    Untestable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTest {
    pub range: (i64, i64),
    /// max |Δ| with the predicted sign (−1)^depth and with the opposite sign.
    pub predicted_deviation: f64,
    pub other_deviation: f64,
    pub verdict: SignVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyNode {
    pub index_path: Vec<usize>,
    pub depth: usize,
    pub predicted: i64,
    pub window: i64,
    pub search_radius: i64,
    pub status: NodeStatus,
    pub maximum: Option<LocalMaximum>,
    pub similarity: Option<Similarity>,
    pub sign_test: Option<SignTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub root: i64,
    pub sigma: f64,
    pub ln_lambda: f64,
    pub k_hat_est: Option<i64>,
    pub c_range: f64,
    pub resonances: Vec<i64>,
    pub nodes: Vec<HierarchyNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HierarchyOptions {
    pub max_depth: usize,
    /// ς, nats per site.
    pub sigma: f64,
    pub epsilon: f64,
    pub c0: f64,
    pub c_range: f64,
}

impl HierarchyOptions {
    pub fn new(max_depth: usize, sigma: f64, epsilon: f64) -> Self {
        HierarchyOptions { max_depth, sigma, epsilon, c0: DEFAULT_C0, c_range: DEFAULT_C_RANGE }
    }
}

/// Strictly decreasing index paths j₀ > j₁ > … of length 1..=max_depth.
fn index_paths(n: usize, max_depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|j| vec![j]).collect();
    while let Some(p) = stack.pop() {
        if p.len() < max_depth {
            for j in (0..*p.last().unwrap()).rev() {
                let mut q = p.clone();
                q.push(j);
                stack.push(q);
            }
        }
        out.push(p);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Build the hierarchy for a profile anchored at its global maximum k₀.
/// `resonances` and `f` must be for the recentred phase θ + k₀α, with ℓ
/// measured from k₀.
///
/// Depth-1 nodes are searched within ς/(4 ln λ)·|K| of k₀ + K; the fitted
/// K̂_est is the smallest integer with every depth-1 deviation ≤ K̂_est², and
/// deeper nodes are searched within K̂_est^depth.
pub fn build_hierarchy(
    profile: &SolutionProfile,
    resonances: &ResonanceSequence,
    f: &EnvelopeModel,
    opts: HierarchyOptions,
) -> Result<HierarchyReport> {
    let ln_lambda = f.ln_lambda;
    if !(ln_lambda > 0.0 && opts.sigma > 0.0) {
        return Err(invalid("need ln λ > 0 and ς > 0"));
    }
    let k0 = profile.anchor;
    let ks: Vec<i64> = resonances.positions();
    let paths = index_paths(ks.len(), opts.max_depth.max(1));
    let mut report = HierarchyReport {
        root: k0,
        sigma: opts.sigma,
        ln_lambda,
        k_hat_est: None,
        c_range: opts.c_range,
        resonances: ks.clone(),
        nodes: Vec::new(),
    };
    if ks.is_empty() {
        return Ok(report);
    }

    let node_geometry = |path: &[usize]| {
        let offset: i64 = path.iter().enumerate().map(|(i, &j)| if i % 2 == 0 { ks[j] } else { -ks[j] }).sum();
        let last = ks[*path.last().unwrap()].abs() as f64;
        let window = ((opts.sigma / (2.0 * ln_lambda)) * last).floor().max(1.0) as i64;
        (k0 + offset, window)
    };

    let mut missing = Vec::new();
    let mut search = |path: &Vec<usize>, radius: i64| -> HierarchyNode {
        let (predicted, window) = node_geometry(path);
        let depth = path.len();
        let mut node = HierarchyNode {
            index_path: path.clone(),
            depth,
            predicted,
            window,
            search_radius: radius,
            status: NodeStatus::Untestable,
            maximum: None,
            similarity: None,
            sign_test: None,
        };
        let (lo, hi) = (predicted - radius, predicted + radius);
        let Ok(found) = local_k_maxima(profile, window, (lo, hi)) else {
            missing.push(path.clone());
            return node;
        };
        node.status = NodeStatus::NotFound;
        if let Some(&b) = found.iter().min_by_key(|&&b| ((b - predicted).abs(), b)) {
            node.status = NodeStatus::Found;
            node.maximum = Some(LocalMaximum {
                position: b,
                window,
                depth,
                index_path: path.clone(),
                predicted,
                deviation: (b - predicted).abs(),
            });
        }
        node
    };

    let mut nodes: Vec<HierarchyNode> = Vec::new();
    for p in paths.iter().filter(|p| p.len() == 1) {
        let r = ((opts.sigma / (4.0 * ln_lambda)) * ks[p[0]].abs() as f64).ceil().max(1.0) as i64;
        nodes.push(search(p, r));
    }
    let devs: Vec<i64> = nodes.iter().filter_map(|n| n.maximum.as_ref().map(|m| m.deviation)).collect();
    let k_hat = devs.iter().map(|&d| (d as f64).sqrt().ceil() as i64).max().map(|k| k.max(1));
    report.k_hat_est = k_hat;
    if let Some(kh) = k_hat {
        for p in paths.iter().filter(|p| p.len() > 1) {
            let r = kh.saturating_pow(p.len() as u32).max(1);
            nodes.push(search(p, r));
        }
    }
    if !missing.is_empty() && nodes.iter().all(|n| n.status == NodeStatus::Untestable) {
        return Err(Error::Coverage { missing });
    }

    let kh = k_hat.unwrap_or(1);
    for node in nodes.iter_mut() {
        let Some(m) = node.maximum.clone() else { continue };
        let last = ks[*node.index_path.last().unwrap()].abs() as f64;
        let lo = (opts.c_range * (kh as f64).powi(node.depth as i32)).ceil() as i64;
        let hi = ((opts.sigma / (4.0 * ln_lambda)) * last).floor() as i64;
        let range = (lo.max(1) <= hi).then_some((lo.max(1), hi));
        node.similarity = Some(match range {
            Some(r) => {
                let (dev, pass) = reflective_similarity(profile, &m, f, r, opts.epsilon, opts.c0)?;
                Similarity { range: Some(r), max_deviation: dev, pass }
            }
            None => Similarity { range: None, max_deviation: 0.0, pass: true },
        });
        let sign_hi = ((opts.sigma / ln_lambda) * last).ceil() as i64;
        node.sign_test = Some(sign_test(profile, &m, f, (1, sign_hi), opts.c0));
    }
    report.nodes = nodes;
    Ok(report)
}

fn reflect_sign(depth: usize) -> i64 {
    // (−1)^{s+1} with s = depth − 1
    if depth % 2 == 1 {
        -1
    } else {
        1
    }
}

/// max |Δ(x)| over the sites of `range` (both signs of x) with
/// Δ(x) = [logU(b + x) − logU(b)] − log f(sign·x), and whether every
/// |Δ(x)| ≤ ε|x| + C₀.
pub fn reflective_similarity(
    profile: &SolutionProfile,
    node: &LocalMaximum,
    f: &EnvelopeModel,
    range: (i64, i64),
    epsilon: f64,
    c0: f64,
) -> Result<(f64, bool)> {
    let (lo, hi) = range;
    if lo < 1 || hi < lo {
        return Err(invalid(format!("empty similarity range [{lo}, {hi}]")));
    }
    let s = reflect_sign(node.depth);
    let b = node.position;
    if !profile.contains(b - hi) || !profile.contains(b + hi) || hi > f.max_ell {
        return Err(invalid("similarity range leaves the profile or model window"));
    }
    let base = profile.log_u_at(b);
    let mut worst = 0.0f64;
    let mut pass = true;
    for x in (-hi..=-lo).chain(lo..=hi) {
        let d = (profile.log_u_at(b + x) - base - f.get(s * x)).abs();
        worst = worst.max(d);
        pass &= d <= epsilon * x.abs() as f64 + c0;
    }
    Ok((worst, pass))
}

fn sign_test(profile: &SolutionProfile, node: &LocalMaximum, f: &EnvelopeModel, range: (i64, i64), c0: f64) -> SignTest {
    let b = node.position;
    let hi = range
        .1
        .min(b - profile.lo)
        .min(profile.hi - b)
        .min(f.max_ell);
    let s = reflect_sign(node.depth);
    let base = profile.log_u_at(b);
    let (mut dp, mut dq, mut asym) = (0.0f64, 0.0f64, 0.0f64);
    for x in (-hi..=-range.0).chain(range.0..=hi) {
        let u = profile.log_u_at(b + x) - base;
        dp = dp.max((u - f.get(s * x)).abs());
        dq = dq.max((u - f.get(-s * x)).abs());
        asym = asym.max((f.get(x) - f.get(-x)).abs());
    }
    let verdict = if asym <= c0 {
        SignVerdict::Untestable
    } else if dp < dq {
        SignVerdict::PredictedWins
    } else {
        SignVerdict::OtherWins
    };
    SignTest { range: (range.0, hi), predicted_deviation: dp, other_deviation: dq, verdict }
}

impl HierarchyReport {
    /// Flat table: depth, path, predicted, found, deviation, max_deviation.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["depth", "path", "predicted", "found", "deviation", "max_deviation", "status"])?;
        for n in &self.nodes {
            let path = n.index_path.iter().map(|j| self.resonances[*j].to_string()).collect::<Vec<_>>().join(";");
            let (found, dev) = match &n.maximum {
                Some(m) => (m.position.to_string(), m.deviation.to_string()),
                None => (String::new(), String::new()),
            };
            let sim = n.similarity.as_ref().map(|s| fmt17(s.max_deviation)).unwrap_or_default();
            wr.write_record([
                n.depth.to_string(),
                path,
                n.predicted.to_string(),
                found,
                dev,
                sim,
                format!("{:?}", n.status).to_lowercase(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_are_strictly_decreasing() {
        let p = index_paths(3, 2);
        assert_eq!(p, vec![vec![0], vec![1], vec![2], vec![1, 0], vec![2, 0], vec![2, 1]]);
        assert_eq!(index_paths(3, 3).len(), 7);
    }
}
