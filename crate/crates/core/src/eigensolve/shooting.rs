use super::profile::SolutionProfile;
use super::{box_eigenvalues_f64, refine_eigenvalue, BoxSpec, EigenBracket};
use crate::error::{invalid, Error, Result};
use crate::logdomain::{LogVec2, SignedLog};
use crate::operator::OperatorParams;
use crate::real::{Real, XReal};

const GLUE_TARGET: f64 = 1e-8;
const GLUE_LIMIT: f64 = 1e-6;

/// Forward solution from the left wall and backward solution from the right
/// wall at one energy; `fwd[i]`, `bwd[i]` hold U(a + i) = (φ(a+i), φ(a+i−1)).
struct Shot<R: Real> {
    fwd: Vec<LogVec2<R>>,
    bwd: Vec<LogVec2<R>>,
}

fn shoot<R: Real>(v: &[R], e: &R, bits: usize) -> Shot<R> {
    let n = v.len();
    let diag: Vec<R> = v.iter().map(|x| e.sub(x)).collect();
    let mut fwd = Vec::with_capacity(n + 1);
    let mut u = LogVec2::<R>::from_f64(1.0, 0.0, bits);
    fwd.push(u.clone());
    for a in &diag {
        u.step(a);
        fwd.push(u.clone());
    }
    let mut bwd = vec![LogVec2::<R>::from_f64(0.0, 1.0, bits); n + 1];
    let mut w = bwd[n].clone();
    for i in (0..n).rev() {
        w.step_back(&diag[i]);
        bwd[i] = w.clone();
    }
    Shot { fwd, bwd }
}

impl<R: Real> Shot<R> {
    /// Site index (offset from a) where both one-sided solutions are largest.
    fn glue_index(&self) -> usize {
        let n = self.fwd.len() - 1;
        (0..n)
            .map(|i| (i, self.fwd[i].norm_log() + self.bwd[i].norm_log()))
            .fold((0, f64::NEG_INFINITY), |b, (i, s)| if s > b.1 { (i, s) } else { b })
            .0
    }

    fn mismatch(&self, i: usize) -> (f64, i8) {
        (self.fwd[i].sin_angle(&self.bwd[i]), self.fwd[i].cross_sign(&self.bwd[i]))
    }

    /// Glue at offset i: left solution up to a+i, rescaled right solution after.
    fn assemble(&self, i: usize) -> Vec<SignedLog> {
        let n = self.fwd.len() - 1;
        let j = if self.bwd[i].component(0).log >= self.bwd[i].component(1).log { 0 } else { 1 };
        let s = self.fwd[i].component(j).div(&self.bwd[i].component(j));
        let mut phi = Vec::with_capacity(n + 1);
        phi.push(SignedLog::ZERO);
        for k in 0..=i {
            phi.push(self.fwd[k].component(0));
        }
        for k in i + 1..n {
            phi.push(self.bwd[k].component(0).mul(&s));
        }
        phi
    }
}

/// Max over sites of |φ(n+1) + φ(n−1) − (E − V(n))φ(n)| relative to the
/// largest of the three terms; φ over [a − 1, b + 1] with zero walls.
fn residual(phi_ext: &[SignedLog], diag: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, &a) in diag.iter().enumerate() {
        let (l, c, r) = (phi_ext[i], phi_ext[i + 1], phi_ext[i + 2]);
        let ac = SignedLog::from_f64(a).mul(&c);
        let d = r.add(&l).sub(&ac);
        let scale = l.log.max(r.log).max(ac.log);
        if d.is_zero() || scale == f64::NEG_INFINITY {
            continue;
        }
        worst = worst.max((d.log - scale).exp());
    }
    worst
}

/// Eigenvector of the Dirichlet box at (approximately) a box eigenvalue E by
/// two-sided shooting. If the glue mismatch exceeds 1e-8, E is re-bisected on
/// the sign of the glue Wronskian until it does not.
pub fn eigenvector_profile(params: &OperatorParams, bx: BoxSpec, e: &XReal) -> Result<SolutionProfile> {
    eigenvector_profile_in::<XReal>(params, bx, e)
}

pub(crate) fn eigenvector_profile_in<R: Real>(params: &OperatorParams, bx: BoxSpec, e: &XReal) -> Result<SolutionProfile> {
    let bits = params.precision_bits;
    let v = params.potential_table::<R>(bx.a, bx.b);
    let e0 = R::from_x(e);
    let shot = shoot(&v, &e0, bits);
    let g = shot.glue_index();
    let (m0, s0) = shot.mismatch(g);
    let (e_fin, shot, m) = if m0 <= GLUE_TARGET { (e0, shot, m0) } else { rebisect(&v, e0, s0, g, bits)? };
    if m > GLUE_LIMIT {
        return Err(Error::IllConditionedEigenpair { mismatch: m });
    }
    let phi = shot.assemble(g);
    let diag: Vec<f64> = v.iter().map(|x| e_fin.sub(x).to_f64()).collect();
    let mut ext = phi.clone();
    ext.push(SignedLog::ZERO);
    let res = residual(&ext, &diag);
    let mut p = SolutionProfile::from_phi(bx.a, &phi, e_fin.to_x(bits));
    p.residual = res;
    p.mismatch = m;
    p.glue = Some(bx.a + g as i64);
    Ok(p)
}

fn rebisect<R: Real>(v: &[R], e0: R, s0: i8, g: usize, bits: usize) -> Result<(R, Shot<R>, f64)> {
    let scale = e0.to_f64().abs().max(1.0);
    let mut h = scale * 2f64.powi(-(bits.min(1000) as i32) + 16).max(f64::MIN_POSITIVE);
    let mut other: Option<R> = None;
    while other.is_none() && h <= 1e-6 * scale {
        for sgn in [1.0, -1.0] {
            let cand = e0.add(&R::from_f64(sgn * h, bits));
            let (_, s) = shoot(v, &cand, bits).mismatch(g);
            if s != s0 {
                other = Some(cand);
                break;
            }
        }
        h *= 4.0;
    }
    let Some(mut hi) = other else {
        let (m, _) = shoot(v, &e0, bits).mismatch(g);
        return Err(Error::IllConditionedEigenpair { mismatch: m });
    };
    let mut lo = e0;
    let mut best: Option<(f64, R, Shot<R>)> = None;
    for _ in 0..1200 {
        let mid = lo.add(&hi).mul_f64(0.5);
        if mid == lo || mid == hi {
            break;
        }
        let sh = shoot(v, &mid, bits);
        let (m, s) = sh.mismatch(g);
        let better = best.as_ref().map_or(true, |b| m < b.0);
        let done = m <= GLUE_TARGET;
        if s == s0 {
            lo = mid.clone();
        } else {
            hi = mid.clone();
        }
        if better {
            best = Some((m, mid, sh));
        }
        if done {
            break;
        }
    }
    let (m, e, sh) = best.ok_or(Error::IllConditionedEigenpair { mismatch: f64::INFINITY })?;
    Ok((e, sh, m))
}

/// Glue mismatch angle at a fixed energy (glue site chosen automatically
/// unless given as an absolute site).
pub fn glue_mismatch(params: &OperatorParams, bx: BoxSpec, e: &XReal, glue: Option<i64>) -> (f64, i64) {
    let v = params.potential_table::<XReal>(bx.a, bx.b);
    let shot = shoot(&v, e, params.precision_bits);
    let g = glue.map_or_else(|| shot.glue_index(), |s| (s - bx.a) as usize);
    (shot.mismatch(g).0, bx.a + g as i64)
}

/// Propagate U(0) = u0 = (φ(0), φ(−1)) to all |ℓ| ≤ n by one-step transfer
/// matrices. The result is normalised so logU(0) = 0 with anchor 0.
pub fn solution_profile<R: Real>(params: &OperatorParams, u0: &LogVec2<R>, n: i64) -> SolutionProfile {
    let n = n.max(0);
    let diag = params.diagonal_table::<R>(-n, (n - 1).max(-n));
    let at = |site: i64| &diag[(site + n) as usize];
    // φ over [−n − 1, n]
    let mut phi = vec![SignedLog::ZERO; (2 * n + 2) as usize];
    let ix = |site: i64| (site + n + 1) as usize;
    phi[ix(0)] = u0.component(0);
    phi[ix(-1)] = u0.component(1);
    let mut u = u0.clone();
    for ell in 0..n {
        u.step(at(ell));
        phi[ix(ell + 1)] = u.component(0);
    }
    let mut w = u0.clone();
    for ell in (-n..0).rev() {
        w.step_back(at(ell));
        phi[ix(ell - 1)] = w.component(1);
    }
    let mut p = SolutionProfile::from_phi(-n, &phi, params.energy.clone());
    p.normalize_at(0);
    p
}

/// Result of searching a large box for an eigenvector localised near a site.
#[derive(Debug, Clone)]
pub struct CenteredSearch {
    pub profile: SolutionProfile,
    pub bracket: EigenBracket,
    /// Seed energies from the probe box, nearest-centred first.
    pub seeds: Vec<(f64, i64)>,
}

/// Find a box eigenvector whose global maximum lies within `max_offset` of
/// `center`. Candidates come from a probe box [center − r, center + r]
/// (double precision); each is then refined in the full box to `tol`.
pub fn find_centered_eigenvector(
    params: &OperatorParams,
    bx: BoxSpec,
    center: i64,
    max_offset: i64,
    probe_radius: i64,
    tol: f64,
) -> Result<CenteredSearch> {
    let probe = BoxSpec::new(center - probe_radius, center + probe_radius)?;
    let es = box_eigenvalues_f64(params, probe, (f64::MIN / 4.0, f64::MAX / 4.0))?;
    let bits = params.precision_bits;
    let mut seeds: Vec<(f64, i64)> = es
        .iter()
        .filter_map(|&e| {
            let p = eigenvector_profile_in::<f64>(params, probe, &XReal::from_f64(e, bits)).ok()?;
            ((p.anchor - center).abs() <= max_offset).then_some((e, p.anchor))
        })
        .collect();
    seeds.sort_by_key(|&(_, a)| ((a - center).abs(), a));
    for &(e, _) in &seeds {
        let bracket = refine_eigenvalue(params, bx, e, tol)?;
        let Ok(profile) = eigenvector_profile(params, bx, &bracket.mid) else { continue };
        if (profile.anchor - center).abs() <= max_offset {
            let mut profile = profile;
            profile.near_degenerate = bracket.near_degenerate;
            return Ok(CenteredSearch { profile, bracket, seeds });
        }
    }
    Err(invalid(format!("no eigenvector with maximum within {max_offset} of site {center}")))
}
