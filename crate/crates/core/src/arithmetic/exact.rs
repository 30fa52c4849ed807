//! Exact rational helpers and logarithms of big rationals.
//!
//! Logs are taken from the leading 64 bits of numerator and denominator plus
//! their bit lengths, so magnitudes far below the f64 range (e^{-1000} and
//! beyond) keep full relative accuracy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::real::ldexp_f64;

const LN2: f64 = std::f64::consts::LN_2;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Fractional part in [0, 1).
pub fn frac(x: &BigRational) -> BigRational {
    let (n, d) = (x.numer(), x.denom());
    BigRational::new(n.mod_floor(d), d.clone())
}

/// Representative of x mod 1 in (−1/2, 1/2].
pub fn centered(x: &BigRational) -> BigRational {
    let f = frac(x);
    let half = rat(1, 2);
    if f > half {
        f - BigRational::one()
    } else {
        f
    }
}

/// ‖x‖_{ℝ/ℤ} = min(frac x, 1 − frac x), exactly.
pub fn torus_norm(x: &BigRational) -> BigRational {
    let f = frac(x);
    let g = BigRational::one() - &f;
    if g < f {
        g
    } else {
        f
    }
}

/// ln ‖x‖ (−∞ when x is an integer).
pub fn ln_torus_norm(x: &BigRational) -> f64 {
    ln_rational(&torus_norm(x))
}

/// Leading bits of n/d as (mantissa, binary exponent): n/d ≈ m·2^e, m ∈ [1/2, 2).
fn ratio_parts(n: &BigInt, d: &BigInt) -> (f64, i64) {
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 {
        (n << (shift as usize)) / d
    } else {
        n / (d << ((-shift) as usize))
    };
    (bigint_to_f64(&q) / 2f64.powi(64), 64 - shift)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        let (_, digits) = n.to_u64_digits();
        let v = digits.first().copied().unwrap_or(0) as f64;
        if n.is_negative() {
            -v
        } else {
            v
        }
    } else {
        let top = n >> ((bits - 64) as usize);
        ldexp_f64(bigint_to_f64(&top), (bits - 64) as i64)
    }
}

/// n/d as f64 with correct scaling (n ≥ 0, d > 0). Underflows to 0 only below f64 range.
pub fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let (m, e) = ratio_parts(&n.abs(), d);
    let v = ldexp_f64(m, e);
    if n.is_negative() {
        -v
    } else {
        v
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    ratio_to_f64(x.numer(), x.denom())
}

/// ln(n/d) for n, d > 0, relative error ≲ 1e-15 (absolute error ≲ 1e-16 near n = d).
pub fn ln_ratio(n: &BigInt, d: &BigInt) -> f64 {
    debug_assert!(n.is_positive() && d.is_positive());
    let (m, e) = ratio_parts(n, d);
    let approx = m.ln() + e as f64 * LN2;
    if approx.abs() < 0.25 {
        // near 1: ln(1 + (n − d)/d) without cancellation
        let diff = n - d;
        if diff.is_zero() {
            return 0.0;
        }
        return ratio_to_f64(&diff, d).ln_1p();
    }
    approx
}

/// ln x for a positive rational (−∞ for zero).
pub fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_ratio(&x.numer().abs(), x.denom())
}

/// ln |sin π a/d| for 0 ≤ a ≤ d/2 (a reduced torus-norm numerator).
pub fn ln_abs_sin_pi_norm(a: &BigInt, d: &BigInt) -> f64 {
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let t = ratio_to_f64(a, d);
    if t > 1e-6 {
        (std::f64::consts::PI * t).sin().ln()
    } else {
        // sin πt = πt·(1 − (πt)²/6 + …)
        let pt = std::f64::consts::PI * t;
        std::f64::consts::PI.ln() + ln_ratio(a, d) + (-pt * pt / 6.0).ln_1p()
    }
}

pub fn ln_abs_sin_pi(x: &BigRational) -> f64 {
    let n = torus_norm(x);
    ln_abs_sin_pi_norm(n.numer(), n.denom())
}

/// Nearest dyadic rational m/2^g to e^{−s} (s ≥ 0), with g ≥ s/ln2 + 64 bits.
pub fn dyadic_exp_neg(s: f64, g: u32) -> BigRational {
    let t = g as f64 - s / LN2;
    assert!(t >= 53.0, "grid too coarse for e^(-{s})");
    let fl = t.floor();
    let mant = (2f64.powf(t - fl) * 2f64.powi(52)).round() as u64;
    let m = BigInt::from(mant) << ((fl as usize) - 52);
    BigRational::new(m, BigInt::one() << (g as usize))
}
