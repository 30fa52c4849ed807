//! End-to-end experiment pipelines shared by the command-line runner, the
//! examples and the acceptance suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::arithmetic::{find_resonances, ln_sin_sum, resonance_exponent, Frequency, Mode, Phase, ResonanceSequence, ScanRange};
use crate::asymptotics::{density_stats, verify_bounds, BoundReport, DensityStats, EnvelopeKind, EnvelopeModel, LogSeries, SlopeKind};
use crate::eigensolve::{find_centered_eigenvector, solution_profile, BoxSpec, CenteredSearch, SolutionProfile};
use crate::error::Result;
use crate::hierarchy::{build_hierarchy, HierarchyOptions, HierarchyReport, NodeStatus};
use crate::logdomain::LogVec2;
use crate::operator::{transfer_norm_logs, OperatorParams, TransferNorms};
use crate::real::XReal;
use crate::sctest::{palindrome_survey, sc_transport_check, ScOptions, ScReport};

/// Bisection tolerance used for eigenvalues: 56 bits short of the working
/// precision.
pub fn eigen_tolerance(bits: usize) -> f64 {
    2f64.powi(-(bits as i32 - 56))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaSample {
    pub q: u64,
    pub x_num: String,
    pub x_den: String,
    pub value: f64,
    pub bound: f64,
    pub k0: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArithRun {
    pub beta_hat: f64,
    pub beta_argmax: i64,
    pub samples: Vec<LemmaSample>,
    pub pass: bool,
}

/// |Σ_{k≠k0} ln|sin π(x + kα)| + (q − 1) ln 2| ≤ C ln q on random rational x.
pub fn arith_run(cfg: &ExperimentConfig, alpha: &Frequency) -> Result<ArithRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let den = BigInt::from(1_000_000_000_039u64);
    let mut samples = Vec::new();
    for &q in &cfg.arith_q {
        let mut taken = 0;
        while taken < cfg.arith_samples {
            let x = BigRational::new(BigInt::from(rng.gen_range(0u64..1_000_000_000_039)), den.clone());
            let (value, k0) = match ln_sin_sum(&x, alpha, q) {
                Ok(r) => r,
                Err(crate::Error::DegenerateArgument { .. }) => continue,
                Err(e) => return Err(e),
            };
            let bound = cfg.arith_c * (q as f64).ln();
            samples.push(LemmaSample {
                q,
                x_num: x.numer().to_string(),
                x_den: x.denom().to_string(),
                value,
                bound,
                k0,
                pass: value.abs() <= bound,
            });
            taken += 1;
        }
    }
    let (beta_hat, beta_argmax) = resonance_exponent(Mode::Beta, alpha, None, ScanRange::tail(cfg.beta_k_max)?)?;
    let pass = samples.iter().all(|s| s.pass);
    Ok(ArithRun { beta_hat, beta_argmax, samples, pass })
}

/// The eigenvector anchored near 0 in a large box, with its f-envelope check.
#[derive(Debug, Clone)]
pub struct EnvelopeRun {
    pub alpha: Frequency,
    pub phase: Phase,
    pub params: OperatorParams,
    pub search: CenteredSearch,
    pub k0: i64,
    /// θ + k₀α.
    pub shifted: Phase,
    /// The profile restricted to [k₀ − N, k₀ + N].
    pub window: SolutionProfile,
    pub f_model: EnvelopeModel,
    pub bound: BoundReport,
}

pub fn envelope_run(cfg: &ExperimentConfig) -> Result<EnvelopeRun> {
    let (alpha, phase, params) = cfg.build_params()?;
    let search = find_centered_eigenvector(
        &params,
        BoxSpec::centered(cfg.box_half_width),
        0,
        cfg.center_offset,
        cfg.probe_radius,
        eigen_tolerance(cfg.precision_bits),
    )?;
    let k0 = search.profile.anchor;
    let shifted = phase.shifted(&alpha, k0)?;
    let window = search.profile.restrict(k0 - cfg.window, k0 + cfg.window)?;
    let f_model = EnvelopeModel::new(EnvelopeKind::F, &alpha, &shifted.value, cfg.ln_lambda, cfg.window)?;
    let bound = verify_bounds(&LogSeries::from(&window), &f_model, cfg.epsilon, cfg.k_onset, cfg.ell_max)?;
    Ok(EnvelopeRun { alpha, phase, params, search, k0, shifted, window, f_model, bound })
}

#[derive(Debug, Clone)]
pub struct TransferRun {
    pub norms: TransferNorms,
    pub g_model: EnvelopeModel,
    pub bound: BoundReport,
    /// The solution started from Ũ(0) ⊥ U(0), ‖Ũ(0)‖ = 1.
    pub independent: SolutionProfile,
    /// max and min over K ≤ |ℓ| ≤ N of log‖A_ℓ‖ − log‖A_ℓŨ(0)‖.
    pub last_simon_max: f64,
    pub last_simon_min: f64,
    pub last_simon_pass: bool,
}

impl TransferRun {
    pub fn pass(&self) -> bool {
        self.bound.verdict && self.last_simon_pass
    }
}

/// Transfer matrices A_ℓ based at k₀, at the eigenvalue of the envelope run.
pub fn transfer_run(cfg: &ExperimentConfig, env: &EnvelopeRun) -> Result<TransferRun> {
    let p = OperatorParams::new(cfg.ln_lambda, env.alpha.clone(), env.shifted.clone())?
        .with_precision(cfg.precision_bits)
        .with_energy(env.search.profile.energy.clone());
    let n = cfg.window;
    let norms = transfer_norm_logs::<XReal>(&p, n);
    let g_model = EnvelopeModel::new(EnvelopeKind::G, &env.alpha, &env.shifted.value, cfg.ln_lambda, n)?;
    let bound = verify_bounds(&LogSeries::from(&norms), &g_model, cfg.epsilon, cfg.k_onset, cfg.ell_max)?;

    // logU(k₀) = 0, so both components are O(1)
    let (u0, u1) = (env.window.phi(env.k0).to_f64(), env.window.phi(env.k0 - 1).to_f64());
    let h = u0.hypot(u1);
    let bits = cfg.precision_bits;
    let perp = LogVec2::<XReal>::from_f64(-u1 / h, u0 / h, bits);
    let independent = solution_profile::<XReal>(&p, &perp, n);

    let (mut mx, mut mn) = (f64::NEG_INFINITY, f64::INFINITY);
    for ell in (-cfg.ell_max..=-cfg.k_onset).chain(cfg.k_onset..=cfg.ell_max) {
        let d = norms.get(ell) - independent.log_u_at(ell);
        mx = mx.max(d);
        mn = mn.min(d);
    }
    Ok(TransferRun {
        norms,
        g_model,
        bound,
        independent,
        last_simon_max: mx,
        last_simon_min: mn,
        last_simon_pass: mx <= cfg.last_simon_nats && mn >= -1e-9,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityRun {
    pub delta_hat: f64,
    pub decay: DensityStats,
    pub growth: Option<DensityStats>,
}

/// Slope statistics of −logU(k)/k and log‖A_k‖/k on K ≤ k ≤ N, the liminf of
/// the former taken at the positive resonance sites of θ + k₀α.
pub fn density_run(cfg: &ExperimentConfig, env: &EnvelopeRun, transfer: Option<&TransferRun>) -> Result<DensityRun> {
    let sites: Vec<i64> = env.shifted.resonances.positions().into_iter().filter(|&k| k >= 1 && k <= cfg.window).collect();
    let sites = if sites.is_empty() { None } else { Some(sites) };
    let decay = density_stats(
        &LogSeries::from(&env.window),
        SlopeKind::Decay,
        cfg.k_onset,
        cfg.window,
        cfg.ln_lambda,
        cfg.density_epsilon,
        sites.as_deref(),
    )?;
    let growth = transfer
        .map(|t| {
            density_stats(&LogSeries::from(&t.norms), SlopeKind::Growth, cfg.k_onset, cfg.window, cfg.ln_lambda, cfg.density_epsilon, None)
        })
        .transpose()?;
    Ok(DensityRun { delta_hat: env.phase.delta_hat, decay, growth })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HierarchyChecks {
    /// Deviation of the depth-1 node at the outermost resonance.
    pub depth1_deviation: Option<i64>,
    /// Deviation of the depth-2 node (outermost, next) and its allowance K̂².
    pub depth2_deviation: Option<i64>,
    pub depth2_allowance: Option<i64>,
    pub similarity_all_pass: bool,
    pub sign_all_win: bool,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct HierarchyRun {
    pub env: EnvelopeRun,
    pub resonances: ResonanceSequence,
    pub report: HierarchyReport,
    pub checks: HierarchyChecks,
}

pub fn hierarchy_run(cfg: &ExperimentConfig) -> Result<HierarchyRun> {
    let env = envelope_run(cfg)?;
    let resonances = find_resonances(&env.alpha, &env.shifted.value, cfg.sigma, ScanRange::resonances(cfg.window as u64)?)?;
    let mut opts = HierarchyOptions::new(cfg.max_depth, cfg.sigma, cfg.epsilon);
    opts.c0 = cfg.hierarchy_c0;
    opts.c_range = cfg.hierarchy_c_range;
    let report = build_hierarchy(&env.window, &resonances, &env.f_model, opts)?;
    let checks = hierarchy_checks(cfg, &report);
    Ok(HierarchyRun { env, resonances, report, checks })
}

/// Depth-1 node at the outermost resonance within `hierarchy_depth1_radius`,
/// depth-2 node (outermost, next) within K̂_est², similarity passing and the
/// predicted reflection sign fitting better at every found node.
pub fn hierarchy_checks(cfg: &ExperimentConfig, report: &HierarchyReport) -> HierarchyChecks {
    let n = report.resonances.len();
    let node = |path: &[usize]| report.nodes.iter().find(|x| x.index_path == path);
    let dev = |path: &[usize]| node(path).and_then(|x| x.maximum.as_ref()).map(|m| m.deviation);
    let depth1_deviation = if n >= 1 { dev(&[n - 1]) } else { None };
    let depth2_deviation = if n >= 2 { dev(&[n - 1, n - 2]) } else { None };
    let depth2_allowance = report.k_hat_est.map(|k| k * k);
    let found: Vec<_> = report.nodes.iter().filter(|x| x.status == NodeStatus::Found).collect();
    let similarity_all_pass = found.iter().all(|x| x.similarity.as_ref().map_or(false, |s| s.pass));
    let sign_all_win = found
        .iter()
        .all(|x| x.sign_test.as_ref().map_or(false, |s| s.predicted_deviation < s.other_deviation));
    let d1 = depth1_deviation.map_or(false, |d| d <= cfg.hierarchy_depth1_radius);
    let d2 = n < 2 || matches!((depth2_deviation, depth2_allowance), (Some(d), Some(a)) if d <= a);
    HierarchyChecks {
        depth1_deviation,
        depth2_deviation,
        depth2_allowance,
        similarity_all_pass,
        sign_all_win,
        pass: d1 && d2 && similarity_all_pass && sign_all_win,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// ln λ > δ̂
    Localized,
    /// 0 < ln λ < δ̂
    SingularContinuous,
    /// ln λ < 0 (outside the scope of the diagnostics)
    Subcritical,
    /// ln λ = δ̂ or ln λ = 0 exactly
    Boundary,
}

pub fn classify(ln_lambda: f64, delta_hat: f64) -> Classification {
    if ln_lambda < 0.0 {
        Classification::Subcritical
    } else if ln_lambda == 0.0 || ln_lambda == delta_hat {
        Classification::Boundary
    } else if ln_lambda > delta_hat {
        Classification::Localized
    } else {
        Classification::SingularContinuous
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeDiagnostics {
    pub eigenvectors: usize,
    /// Fraction passing the outer exponential-decay test.
    pub decay_rate: f64,
    /// Fraction with near-palindromic transport at the first resonance.
    pub palindrome_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub ln_lambda: f64,
    pub delta_hat: f64,
    pub classification: Classification,
    pub diagnostics: Option<RegimeDiagnostics>,
    /// Diagnostics agree with the classification (decay rate ≥ 0.9 when
    /// localized; decay rate ≤ 0.1 and palindrome rate ≥ 0.8 when
    /// singular continuous).
    pub consistent: Option<bool>,
}

pub fn sc_options(cfg: &ExperimentConfig, half_width: i64, max_eigenvectors: Option<usize>) -> ScOptions {
    ScOptions {
        half_width,
        bulk_fraction: cfg.sc_bulk_fraction,
        epsilon: cfg.sc_epsilon,
        gap_threshold: cfg.sc_gap_threshold,
        c_max: cfg.sc_c_max,
        decay_slope: cfg.decay_slope,
        max_eigenvectors,
    }
}

fn diagnostics(report: &ScReport) -> RegimeDiagnostics {
    let n = report.records.len();
    let nf = n.max(1) as f64;
    RegimeDiagnostics {
        eigenvectors: n,
        decay_rate: report.decaying as f64 / nf,
        palindrome_rate: report.pass_fraction.first().map_or(0.0, |p| p.1),
    }
}

fn consistent(c: Classification, d: &RegimeDiagnostics) -> Option<bool> {
    if d.eigenvectors == 0 {
        return None;
    }
    match c {
        Classification::Localized => Some(d.decay_rate >= 0.9),
        Classification::SingularContinuous => Some(d.decay_rate <= 0.1 && d.palindrome_rate >= 0.8),
        _ => None,
    }
}

pub fn regime_verdict(cfg: &ExperimentConfig, params: &OperatorParams, phase: &Phase, half_width: i64, max_eigs: Option<usize>) -> Result<RegimeVerdict> {
    let classification = classify(cfg.ln_lambda, phase.delta_hat);
    let diag = match classification {
        Classification::Localized | Classification::SingularContinuous => {
            let rep = palindrome_survey(params, &phase.resonances, phase.delta_hat, sc_options(cfg, half_width, max_eigs))?;
            Some(diagnostics(&rep))
        }
        _ => None,
    };
    Ok(RegimeVerdict {
        ln_lambda: cfg.ln_lambda,
        delta_hat: phase.delta_hat,
        classification,
        consistent: diag.as_ref().and_then(|d| consistent(classification, d)),
        diagnostics: diag,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScRun {
    pub report: ScReport,
    pub pass_fraction: f64,
    pub c_fit: f64,
    pub pass: bool,
}

/// The palindrome survey at the configured box, judged against the pass
/// fraction, the fitted constant and the absence of decaying eigenvectors.
pub fn sc_run(cfg: &ExperimentConfig, params: &OperatorParams, phase: &Phase) -> Result<ScRun> {
    let report = sc_transport_check(params, &phase.resonances, phase.delta_hat, sc_options(cfg, cfg.sc_half_width, None))?;
    let pass_fraction = report.pass_fraction.first().map_or(0.0, |p| p.1);
    let c_fit = report.c_fit.first().map_or(f64::NAN, |p| p.1);
    let pass = pass_fraction >= cfg.sc_pass_fraction && c_fit <= cfg.sc_c_max && report.decaying == 0;
    Ok(ScRun { report, pass_fraction, c_fit, pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub ln_lambda: f64,
    pub delta_target: f64,
    pub delta_hat: Option<f64>,
    pub classification: Option<Classification>,
    pub eigenvectors: Option<usize>,
    pub decay_rate: Option<f64>,
    pub palindrome_rate: Option<f64>,
    pub consistent: Option<bool>,
    pub error: Option<String>,
}

/// One cell per (ln λ, δ) in grid order, evaluated concurrently; failures are
/// recorded in the row.
pub fn sweep_phase_diagram(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let alpha = cfg.build_frequency()?;
    let cells: Vec<(f64, f64)> =
        cfg.sweep_ln_lambda.iter().flat_map(|&l| cfg.sweep_delta.iter().map(move |&d| (l, d))).collect();
    let rows = cells
        .par_iter()
        .map(|&(l, d)| {
            let mut row = SweepRow {
                ln_lambda: l,
                delta_target: d,
                delta_hat: None,
                classification: None,
                eigenvectors: None,
                decay_rate: None,
                palindrome_rate: None,
                consistent: None,
                error: None,
            };
            let run = || -> Result<RegimeVerdict> {
                let mut c = cfg.clone();
                c.ln_lambda = l;
                c.delta = d;
                let phase = c.build_phase(&alpha)?;
                let params = OperatorParams::new(l, alpha.clone(), phase.clone())?.with_precision(c.precision_bits);
                regime_verdict(&c, &params, &phase, c.cell_half_width, Some(c.cell_eigenvectors))
            };
            match run() {
                Ok(v) => {
                    row.delta_hat = Some(v.delta_hat);
                    row.classification = Some(v.classification);
                    row.consistent = v.consistent;
                    if let Some(dg) = v.diagnostics {
                        row.eigenvectors = Some(dg.eigenvectors);
                        row.decay_rate = Some(dg.decay_rate);
                        row.palindrome_rate = Some(dg.palindrome_rate);
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(rows)
}
