//! Scalar abstraction shared by the double-precision and extended-precision
//! code paths.
//!
//! Recursions along a box (Sturm sequences, shooting, determinants) are written
//! once against [`Real`] and instantiated with `f64` for bulk work and [`XReal`]
//! wherever eigenvector tails are exponentially sensitive to the energy.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;

use crate::arithmetic::exact;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default number of fractional mantissa bits for extended-precision scalars.
pub const DEFAULT_PRECISION_BITS: usize = 256;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

pub trait Real: Clone + fmt::Debug + Send + Sync + PartialOrd + 'static {
    /// True for arbitrary-precision implementations.
    const EXTENDED: bool;

    fn from_f64(x: f64, bits: usize) -> Self;
    fn from_x(x: &XReal) -> Self;
    fn to_x(&self, bits: usize) -> XReal;
    fn from_rational(x: &BigRational, bits: usize) -> Self;
    /// cos 2πy for an exact rational y.
    fn cos_2pi(y: &BigRational, bits: usize) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn mul_f64(&self, c: f64) -> Self;

    fn is_zero(&self) -> bool;
    fn signum(&self) -> i8;
    /// Natural log of |x| as f64 (−∞ for zero); valid far outside the f64 range.
    fn ln_abs(&self) -> f64;
    fn to_f64(&self) -> f64;
    /// Multiply by 2^e exactly.
    fn ldexp(&self, e: i64) -> Self;
    /// Binary exponent b with 2^(b−1) ≤ |x| < 2^b; `None` for zero.
    fn exponent2(&self) -> Option<i64>;
    fn precision(&self) -> usize;
}

impl Real for f64 {
    const EXTENDED: bool = false;

    fn from_f64(x: f64, _bits: usize) -> Self {
        x
    }
    fn from_x(x: &XReal) -> Self {
        x.to_f64()
    }
    fn to_x(&self, bits: usize) -> XReal {
        XReal::from_f64(*self, bits)
    }
    fn from_rational(x: &BigRational, _bits: usize) -> Self {
        exact::rational_to_f64(x)
    }
    fn cos_2pi(y: &BigRational, _bits: usize) -> Self {
        let r = exact::frac(y);
        (2.0 * std::f64::consts::PI * exact::rational_to_f64(&r)).cos()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn mul_f64(&self, c: f64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn ln_abs(&self) -> f64 {
        f64::abs(*self).ln()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ldexp(&self, e: i64) -> Self {
        ldexp_f64(*self, e)
    }
    fn exponent2(&self) -> Option<i64> {
        if *self == 0.0 || !self.is_finite() {
            return None;
        }
        let (_, e) = frexp(*self);
        Some(e)
    }
    fn precision(&self) -> usize {
        53
    }
}

/// x · 2^e without intermediate overflow for moderate |e|.
pub fn ldexp_f64(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Split x = m · 2^e with |m| ∈ [1/2, 1).
pub fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: scale up first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(m_bits), e)
}

/// Arbitrary-precision real backed by `astro_float::BigFloat`.
#[derive(Clone)]
pub struct XReal {
    v: BigFloat,
    p: usize,
}

impl XReal {
    /// Working mantissa width for `bits` fractional bits: a guard word on top.
    pub fn mantissa_bits(bits: usize) -> usize {
        bits.max(64) + 64
    }

    fn wrap(v: BigFloat, p: usize) -> Self {
        XReal { v, p }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_f64(0.0, bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Self {
        let p = Self::mantissa_bits(bits);
        Self::wrap(BigFloat::from_f64(x, p), p)
    }

    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        let p = Self::mantissa_bits(bits);
        let (sign, digits) = n.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(bits);
        }
        let e = (digits.len() * 64) as i32;
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&digits, s, e);
        v.set_precision(p, RM).expect("precision");
        Self::wrap(v, p)
    }

    pub fn from_rational(x: &BigRational, bits: usize) -> Self {
        let n = Self::from_bigint(x.numer(), bits + 64);
        let d = Self::from_bigint(x.denom(), bits + 64);
        let p = Self::mantissa_bits(bits);
        Self::wrap(n.v.div(&d.v, p, RM), p)
    }

    pub fn cos_2pi(y: &BigRational, bits: usize) -> Self {
        let r = exact::frac(y);
        let p = Self::mantissa_bits(bits);
        let q = p + 64;
        let yr = Self::from_rational(&r, q);
        CONSTS.with(|cc| {
            let mut cc = cc.borrow_mut();
            let two_pi = cc.pi(q, RM).mul(&BigFloat::from_f64(2.0, q), q, RM);
            let arg = two_pi.mul(&yr.v, q, RM);
            let mut c = arg.cos(q, RM, &mut cc);
            c.set_precision(p, RM).expect("precision");
            Self::wrap(c, p)
        })
    }

    pub fn bits(&self) -> usize {
        self.p.saturating_sub(64)
    }

    /// Parse a decimal string.
    pub fn parse(s: &str, bits: usize) -> Option<Self> {
        let p = Self::mantissa_bits(bits);
        let v = CONSTS.with(|cc| BigFloat::parse(s.trim(), Radix::Dec, p, RM, &mut cc.borrow_mut()));
        if v.is_nan() {
            None
        } else {
            Some(Self::wrap(v, p))
        }
    }

    /// Decimal rendering with enough digits to round-trip the mantissa.
    pub fn to_decimal_string(&self) -> String {
        CONSTS.with(|cc| {
            self.v
                .format(Radix::Dec, RM, &mut cc.borrow_mut())
                .unwrap_or_else(|_| format!("{}", self.to_f64()))
        })
    }

    fn top_word(&self) -> Option<(u64, i64)> {
        let (m, _n, _s, e, _) = self.v.as_raw_parts()?;
        let top = *m.last()?;
        if top == 0 {
            return None;
        }
        Some((top, e as i64))
    }

    pub fn midpoint(&self, o: &Self) -> Self {
        self.add(o).ldexp(-1)
    }

    pub fn max(&self, o: &Self) -> Self {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        Self::wrap(self.v.add(&o.v, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        Self::wrap(self.v.sub(&o.v, p, RM), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        Self::wrap(self.v.mul(&o.v, p, RM), p)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.p.max(o.p);
        Self::wrap(self.v.div(&o.v, p, RM), p)
    }

    pub fn ldexp(&self, e: i64) -> Self {
        let mut v = self.v.clone();
        if let Some(cur) = v.exponent() {
            if !v.is_zero() {
                v.set_exponent((cur as i64 + e) as i32);
            }
        }
        Self::wrap(v, self.p)
    }

    pub fn to_f64(&self) -> f64 {
        match self.top_word() {
            None => 0.0,
            Some((top, e)) => {
                let m = top as f64 / 2f64.powi(64);
                let s = if self.v.is_negative() { -1.0 } else { 1.0 };
                s * ldexp_f64(m, e)
            }
        }
    }
}

impl fmt::Debug for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XReal({:.17e}; {} bits)", self.to_f64(), self.bits())
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for XReal {
    fn eq(&self, o: &Self) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

impl Real for XReal {
    const EXTENDED: bool = true;

    fn from_f64(x: f64, bits: usize) -> Self {
        XReal::from_f64(x, bits)
    }
    fn from_x(x: &XReal) -> Self {
        x.clone()
    }
    fn to_x(&self, bits: usize) -> XReal {
        let mut v = self.v.clone();
        let p = XReal::mantissa_bits(bits);
        v.set_precision(p, RM).expect("precision");
        XReal::wrap(v, p)
    }
    fn from_rational(x: &BigRational, bits: usize) -> Self {
        XReal::from_rational(x, bits)
    }
    fn cos_2pi(y: &BigRational, bits: usize) -> Self {
        XReal::cos_2pi(y, bits)
    }
    fn add(&self, o: &Self) -> Self {
        XReal::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        XReal::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        XReal::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        XReal::div(self, o)
    }
    fn neg(&self) -> Self {
        XReal::wrap(self.v.neg(), self.p)
    }
    fn abs(&self) -> Self {
        XReal::wrap(self.v.abs(), self.p)
    }
    fn mul_f64(&self, c: f64) -> Self {
        self.mul(&XReal::from_f64(c, self.bits()))
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn signum(&self) -> i8 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }
    fn ln_abs(&self) -> f64 {
        match self.top_word() {
            None => f64::NEG_INFINITY,
            Some((top, e)) => (top as f64).ln() + (e - 64) as f64 * std::f64::consts::LN_2,
        }
    }
    fn to_f64(&self) -> f64 {
        XReal::to_f64(self)
    }
    fn ldexp(&self, e: i64) -> Self {
        XReal::ldexp(self, e)
    }
    fn exponent2(&self) -> Option<i64> {
        self.top_word().map(|(_, e)| e)
    }
    fn precision(&self) -> usize {
        self.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn frexp_roundtrip() {
        for &x in &[1.0, 0.75, -3.5, 1e-300, 5e-320, 1e300] {
            let (m, e) = frexp(x);
            assert!((0.5..1.0).contains(&m.abs()), "{x}");
            assert_eq!(ldexp_f64(m, e), x);
        }
    }

    #[test]
    fn xreal_integer_and_log() {
        let n = BigInt::from(12345678901234567890u64) * BigInt::from(1u64 << 40);
        let x = XReal::from_bigint(&n, 128);
        let expected = (12345678901234567890f64).ln() + 40.0 * std::f64::consts::LN_2;
        assert!((x.ln_abs() - expected).abs() < 1e-14);
        assert_eq!(XReal::from_f64(1.5, 128).to_f64(), 1.5);
        assert_eq!(XReal::from_f64(-0.375, 128).exponent2(), Some(-1));
        assert_eq!((-0.375f64).exponent2(), Some(-1));
    }

    #[test]
    fn xreal_cos_matches_f64() {
        let y = BigRational::new(BigInt::from(1), BigInt::from(8));
        let c = XReal::cos_2pi(&y, 256);
        assert!((c.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        let y = BigRational::new(BigInt::from(13), BigInt::from(4));
        assert!(XReal::cos_2pi(&y, 256).to_f64().abs() < 1e-70);
    }

    #[test]
    fn xreal_ldexp_and_order() {
        let a = XReal::from_f64(3.0, 200);
        let b = a.ldexp(-2);
        assert_eq!(b.to_f64(), 0.75);
        assert!(b < a);
        assert_eq!(a.midpoint(&b).to_f64(), 1.875);
        let s = a.div(&XReal::from_f64(7.0, 200)).to_decimal_string();
        assert!(s.starts_with("4.285714285714285714285714285714285714285714"), "{s}");
    }
}
