use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::frequency::Frequency;
use super::orbit::Orbit;
use crate::error::{invalid, Error, Result};

/// S = Σ_{k≠k0} ln|sin π(x + kα)| + (q_n − 1) ln 2 over 0 ≤ k < q_n, with k0
/// the minimiser of |sin π(x + kα)|. Each argument is reduced mod 1 exactly
/// before the floating sine.
pub fn ln_sin_sum(x: &BigRational, alpha: &Frequency, q_n: u64) -> Result<(f64, i64)> {
    if !alpha.is_convergent_denominator(q_n) {
        return Err(invalid(format!("{q_n} is not a convergent denominator of α")));
    }
    let orbit = Orbit::new(x, alpha.value());
    let mut k0 = 0i64;
    let mut k0_norm: Option<BigInt> = None;
    for k in 0..q_n as i64 {
        let n = orbit.norm_numer(k);
        if n.is_zero() {
            return Err(Error::DegenerateArgument { k });
        }
        if k0_norm.as_ref().map_or(true, |m| n < *m) {
            k0 = k;
            k0_norm = Some(n);
        }
    }
    let mut s = (q_n as f64 - 1.0) * std::f64::consts::LN_2;
    for k in (0..q_n as i64).filter(|&k| k != k0) {
        s += orbit.ln_abs_sin_pi(k);
    }
    Ok((s, k0))
}
