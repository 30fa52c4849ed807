//! Finite Dirichlet boxes: Sturm-bisection spectra, two-sided shooting for
//! eigenvectors, and free propagation of arbitrary solutions.

mod profile;
mod shooting;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::operator::OperatorParams;
use crate::real::{Real, XReal};

pub use profile::{fmt17, ProfileMeta, SolutionProfile};
pub use shooting::{eigenvector_profile, find_centered_eigenvector, glue_mismatch, solution_profile, CenteredSearch};

/// Dirichlet restriction to [a, b]: φ(a − 1) = φ(b + 1) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub a: i64,
    pub b: i64,
}

impl BoxSpec {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if b < a {
            return Err(invalid(format!("empty box [{a}, {b}]")));
        }
        Ok(BoxSpec { a, b })
    }

    /// [−r, r].
    pub fn centered(r: i64) -> Self {
        BoxSpec { a: -r, b: r }
    }

    pub fn size(&self) -> usize {
        (self.b - self.a + 1) as usize
    }
}

/// Number of eigenvalues of the tridiagonal box below `e`, from the pivots of
/// the LDLᵀ factorisation of H − E (sign changes of P_0, …, P_k).
pub fn sturm_count<R: Real>(v: &[R], e: &R) -> usize {
    let bits = e.precision();
    let tiny = R::from_f64(1.0, bits).ldexp(-(bits as i64) - 20);
    let one = R::from_f64(1.0, bits);
    let mut count = 0;
    let mut q: Option<R> = None;
    for vj in v {
        let mut d = vj.sub(e);
        if let Some(q) = &q {
            d = d.sub(&one.div(q));
        }
        if d.is_zero() {
            d = tiny.neg();
        }
        if d.signum() < 0 {
            count += 1;
        }
        q = Some(d);
    }
    count
}

/// Gershgorin enclosure of the box spectrum.
fn spectral_hull(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min) - 2.0;
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 2.0;
    (lo - 1e-9, hi + 1e-9)
}

/// Brackets [l, u] in double precision, one per eigenvalue index in the window.
fn isolate_f64(v: &[f64], e_lo: f64, e_hi: f64) -> Vec<(usize, f64, f64)> {
    let (c_lo, c_hi) = (sturm_count(v, &e_lo), sturm_count(v, &e_hi));
    (c_lo..c_hi)
        .into_par_iter()
        .map(|j| {
            let (mut l, mut u) = (e_lo, e_hi);
            while u - l > 4.0 * f64::EPSILON * l.abs().max(u.abs()).max(1.0) {
                let m = 0.5 * (l + u);
                if m <= l || m >= u {
                    break;
                }
                if sturm_count(v, &m) > j {
                    u = m;
                } else {
                    l = m;
                }
            }
            (j, l, u)
        })
        .collect()
}

/// Eigenvalues in double precision (bracket midpoints).
pub fn box_eigenvalues_f64(params: &OperatorParams, bx: BoxSpec, window: (f64, f64)) -> Result<Vec<f64>> {
    if !(window.0 < window.1) {
        return Err(invalid("energy window must satisfy E_lo < E_hi"));
    }
    let v = params.potential_table::<f64>(bx.a, bx.b);
    let (h0, h1) = spectral_hull(&v);
    let (lo, hi) = (window.0.max(h0), window.1.min(h1));
    if lo >= hi {
        return Ok(vec![]);
    }
    Ok(isolate_f64(&v, lo, hi).into_iter().map(|(_, l, u)| 0.5 * (l + u)).collect())
}

/// Eigenvalues of the box in [E_lo, E_hi], each bracketed to width ≤ tol in
/// extended precision and returned as the bracket midpoint.
pub fn box_eigenvalues(params: &OperatorParams, bx: BoxSpec, window: (f64, f64), tol: f64) -> Result<Vec<XReal>> {
    Ok(box_eigen_brackets(params, bx, window, tol)?.into_iter().map(|b| b.mid).collect())
}

#[derive(Debug, Clone)]
pub struct EigenBracket {
    pub index: usize,
    pub lo: XReal,
    pub hi: XReal,
    pub mid: XReal,
    /// The neighbouring eigenvalue is closer than the requested tolerance.
    pub near_degenerate: bool,
}

pub fn box_eigen_brackets(
    params: &OperatorParams,
    bx: BoxSpec,
    window: (f64, f64),
    tol: f64,
) -> Result<Vec<EigenBracket>> {
    if !(window.0 < window.1) {
        return Err(invalid("energy window must satisfy E_lo < E_hi"));
    }
    let bits = params.precision_bits;
    let floor = 2f64.powi(-(XReal::mantissa_bits(bits) as i32) + 8);
    if !(tol >= floor) {
        return Err(invalid(format!("tolerance {tol:e} below the precision floor {floor:e}")));
    }
    let vf = params.potential_table::<f64>(bx.a, bx.b);
    let vx = params.potential_table::<XReal>(bx.a, bx.b);
    let (h0, h1) = spectral_hull(&vf);
    let (lo, hi) = (window.0.max(h0), window.1.min(h1));
    if lo >= hi {
        return Ok(vec![]);
    }
    let seeds = isolate_f64(&vf, lo, hi);
    let mut out: Vec<EigenBracket> = seeds
        .par_iter()
        .map(|&(j, l, u)| refine_bracket(&vx, j, l, u, tol, bits))
        .collect();
    out.sort_by_key(|b| b.index);
    for i in 1..out.len() {
        if out[i].lo.sub(&out[i - 1].hi).to_f64() < tol {
            out[i].near_degenerate = true;
            out[i - 1].near_degenerate = true;
        }
    }
    Ok(out)
}

/// Extended-precision bisection for eigenvalue index j, starting from a
/// double-precision bracket widened until the extended Sturm counts agree.
pub(crate) fn refine_bracket(vx: &[XReal], j: usize, l: f64, u: f64, tol: f64, bits: usize) -> EigenBracket {
    let scale = l.abs().max(u.abs()).max(1.0);
    let mut pad = 1e-12 * scale;
    let (mut lx, mut ux) = loop {
        let lx = XReal::from_f64(l - pad, bits);
        let ux = XReal::from_f64(u + pad, bits);
        if sturm_count(vx, &lx) <= j && sturm_count(vx, &ux) > j {
            break (lx, ux);
        }
        pad *= 16.0;
    };
    let tol_x = XReal::from_f64(tol, bits);
    while ux.sub(&lx) > tol_x {
        let m = lx.midpoint(&ux);
        if m == lx || m == ux {
            break;
        }
        if sturm_count(vx, &m) > j {
            ux = m;
        } else {
            lx = m;
        }
    }
    let mid = lx.midpoint(&ux);
    EigenBracket { index: j, lo: lx, hi: ux, mid, near_degenerate: false }
}

/// Bracket the single box eigenvalue nearest to an approximate energy `e0`.
pub fn refine_eigenvalue(params: &OperatorParams, bx: BoxSpec, e0: f64, tol: f64) -> Result<EigenBracket> {
    let vf = params.potential_table::<f64>(bx.a, bx.b);
    let vx = params.potential_table::<XReal>(bx.a, bx.b);
    let c = sturm_count(&vf, &e0);
    // candidates: index c−1 (just below) and c (just above); keep the closer one
    let mut best: Option<(f64, usize, f64, f64)> = None;
    for j in [c.wrapping_sub(1), c] {
        if j >= vf.len() {
            continue;
        }
        let (h0, h1) = spectral_hull(&vf);
        let seeds = isolate_one(&vf, j, h0, h1);
        let d = (0.5 * (seeds.0 + seeds.1) - e0).abs();
        if best.map_or(true, |b| d < b.0) {
            best = Some((d, j, seeds.0, seeds.1));
        }
    }
    let (_, j, l, u) = best.ok_or_else(|| invalid("box has no eigenvalues"))?;
    let bits = params.precision_bits;
    let mut b = refine_bracket(&vx, j, l, u, tol, bits);
    // flag a neighbour within tolerance
    let below = XReal::from_f64(b.lo.to_f64() - tol, bits);
    let above = XReal::from_f64(b.hi.to_f64() + tol, bits);
    b.near_degenerate = sturm_count(&vx, &above) - sturm_count(&vx, &below) > 1;
    Ok(b)
}

fn isolate_one(v: &[f64], j: usize, mut l: f64, mut u: f64) -> (f64, f64) {
    while u - l > 4.0 * f64::EPSILON * l.abs().max(u.abs()).max(1.0) {
        let m = 0.5 * (l + u);
        if m <= l || m >= u {
            break;
        }
        if sturm_count(v, &m) > j {
            u = m;
        } else {
            l = m;
        }
    }
    (l, u)
}
