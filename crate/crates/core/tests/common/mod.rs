//! Per-instance structural checks shared by the proptest suite and the
//! acceptance run. Each returns Err with a description on violation.
#![allow(dead_code)]

use mathieu_lab::arithmetic::exact::{rat, torus_norm};
use mathieu_lab::arithmetic::{Frequency, Phase};
use mathieu_lab::eigensolve::SolutionProfile;
use mathieu_lab::logdomain::{LogMat2, LogVec2, SignedLog};
use mathieu_lab::operator::{determinant_logs, transfer_product, OperatorParams};
use mathieu_lab::sctest::wronskian_profile;
use mathieu_lab::XReal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Check = std::result::Result<(), String>;

/// Logs are read out in f64, whatever the working precision.
pub const LOG_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Instance {
    pub coeffs: Vec<u64>,
    pub theta: (i64, i64),
    pub ln_lambda: f64,
    pub energy: f64,
}

impl Instance {
    pub fn params(&self, bits: usize) -> OperatorParams {
        let alpha = Frequency::from_coefficients(&self.coeffs).unwrap();
        let ph = Phase::explicit(&alpha, &rat(self.theta.0, self.theta.1)).unwrap();
        OperatorParams::new(self.ln_lambda, alpha, ph)
            .unwrap()
            .with_precision(bits)
            .with_energy_f64(self.energy)
    }
}

pub fn cocycle(inst: &Instance, m: i64, k1: i64, k2: i64) -> Check {
    let p = inst.params(512);
    let whole: LogMat2<XReal> = transfer_product(&p, k1 + k2, m);
    let split = transfer_product::<XReal>(&p, k2, m + k1).mul(&transfer_product(&p, k1, m));
    let (d, signs) = whole.log_distance(&split, 80.0);
    (signs && d < LOG_TOL).then_some(()).ok_or(format!("cocycle ({m}, {k1}, {k2}): Δ = {d}, signs {signs}"))
}

pub fn unimodular(inst: &Instance, m: i64, k: i64) -> Check {
    let p = inst.params(512);
    let a: LogMat2<XReal> = transfer_product(&p, k, m);
    let d = a.det_log();
    (d.abs() < LOG_TOL).then_some(()).ok_or(format!("ln|det A_{k}| = {d}"))
}

/// A_k(θ + mα) = [[P_k(m), −P_{k−1}(m+1)], [P_{k−1}(m), −P_{k−2}(m+1)]].
pub fn determinant_entries(inst: &Instance, m: i64, k: usize) -> Check {
    let p = inst.params(512);
    let a: LogMat2<XReal> = transfer_product(&p, k as i64, m);
    let here = determinant_logs::<XReal>(&p, k, m);
    let next = determinant_logs::<XReal>(&p, k, m + 1);
    let want = [[here[k], next[k - 1].neg()], [here[k - 1], next[k - 2].neg()]];
    let top = a.norm_log();
    for i in 0..2 {
        for j in 0..2 {
            let (x, w) = (a.entry(i, j), want[i][j]);
            if x.log < top - 80.0 && w.log < top - 80.0 {
                continue;
            }
            if x.sign != w.sign || (x.log - w.log).abs() > LOG_TOL {
                return Err(format!("entry ({i}, {j}) at k = {k}: {x:?} vs {w:?}"));
            }
        }
    }
    Ok(())
}

/// Two solutions from (1, 0) and (0, 1) at site lo − 1, lo.
pub fn wronskian_constant(inst: &Instance, lo: i64, len: i64) -> Check {
    let p = inst.params(256);
    let diag = p.diagonal_table::<XReal>(lo, lo + len - 1);
    let run = |x: f64, y: f64| {
        // state (φ(n), φ(n − 1))
        let mut v = LogVec2::<XReal>::from_f64(y, x, 256);
        let mut out = vec![SignedLog::from_f64(x), SignedLog::from_f64(y)];
        for a in &diag {
            v.step(a);
            out.push(v.component(0));
        }
        SolutionProfile::from_phi(lo, &out, p.energy.clone())
    };
    let w = wronskian_profile(&run(1.0, 0.0), &run(0.0, 1.0)).map_err(|e| e.to_string())?;
    let w0 = w.values[0];
    for (i, x) in w.values.iter().enumerate() {
        if x.sign != w0.sign || (x.log - w0.log).abs() > 1e-6 {
            return Err(format!("W({}) = {x:?} vs {w0:?}", w.lo + i as i64));
        }
    }
    Ok(())
}

/// ‖x‖ against the integer oracle min(r, d − r)/d on the reduced residue.
pub fn torus_norm_exact(n: i64, d: i64, shift: i64) -> Check {
    let x = rat(n, d);
    let r = n.rem_euclid(d);
    let oracle = rat(r.min(d - r), d);
    let got = torus_norm(&x);
    let shifted = torus_norm(&(&x + rat(shift, 1)));
    let neg = torus_norm(&(-x.clone()));
    (got == oracle && shifted == oracle && neg == oracle && got <= rat(1, 2))
        .then_some(())
        .ok_or(format!("‖{n}/{d}‖ = {got} (oracle {oracle}, shifted {shifted}, negated {neg})"))
}

/// Convergent recurrences, sign alternation of q_nα − p_n, and the best
/// approximation property ‖kα‖ ≥ ‖q_n α‖ for 1 ≤ k < q_{n+1}.
pub fn convergents(coeffs: &[u64]) -> Check {
    let alpha = Frequency::from_coefficients(coeffs).unwrap();
    let a = alpha.cf_coeffs();
    let c = alpha.convergents();
    // [0; a_1, …]: p_0/q_0 = 0/1, p_{−1}/q_{−1} = 1/0
    let (mut p2, mut q2, mut p1, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for (i, (p, q)) in c.iter().enumerate() {
        let (pn, qn) = (&a[i] * &p1 + &p2, &a[i] * &q1 + &q2);
        if (&pn, &qn) != (p, q) {
            return Err(format!("recurrence breaks at {i}: {p}/{q} vs {pn}/{qn}"));
        }
        if !p.gcd(q).is_one() {
            return Err(format!("{p}/{q} not reduced"));
        }
        (p2, q2, p1, q1) = (p1, q1, pn, qn);
    }
    let av = alpha.value();
    let norm = |k: &BigInt| torus_norm(&(av * BigRational::from_integer(k.clone())));
    for w in c.windows(2) {
        let (qn, qn1) = (&w[0].1, &w[1].1);
        let best = norm(qn);
        let lim: i64 = qn1.try_into().unwrap_or(i64::MAX).min(5000);
        for k in 1..lim {
            let kb = BigInt::from(k);
            if norm(&kb) < best {
                return Err(format!("‖{k}α‖ < ‖{qn}α‖"));
            }
        }
        // consecutive errors alternate in sign
        let e0 = av * BigRational::from_integer(qn.clone()) - BigRational::from_integer(w[0].0.clone());
        let e1 = av * BigRational::from_integer(qn1.clone()) - BigRational::from_integer(w[1].0.clone());
        if !e1.is_zero() && e0.is_positive() == e1.is_positive() {
            return Err(format!("errors at q = {qn}, {qn1} do not alternate"));
        }
    }
    Ok(())
}
