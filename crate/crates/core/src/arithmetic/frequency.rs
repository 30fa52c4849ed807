use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{self, rational_to_f64};
use crate::error::{invalid, Result};

pub type Convergent = (BigInt, BigInt);

/// Euclid expansion x = [0; a_1, a_2, …] of a rational in (0, 1).
///
/// Returns the partial quotients and convergents p_n/q_n, n = 1..m. The
/// expansion is the canonical one (last quotient ≥ 2 unless x = 1/1).
pub fn continued_fraction(x: &BigRational, max_depth: usize) -> Result<(Vec<BigInt>, Vec<Convergent>)> {
    if max_depth < 1 {
        return Err(invalid("max_depth must be at least 1"));
    }
    if !(x.is_positive() && *x < BigRational::one()) {
        return Err(invalid("continued fraction needs 0 < x < 1"));
    }
    let mut coeffs = Vec::new();
    let mut convs = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    while !num.is_zero() && coeffs.len() < max_depth {
        let (a, r) = den.div_rem(&num);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        convs.push((p.clone(), q.clone()));
        coeffs.push(a);
        den = std::mem::replace(&mut num, r);
    }
    Ok((coeffs, convs))
}

/// Rebuild the rational [0; a_1, …, a_m].
pub fn from_coefficients(coeffs: &[BigInt]) -> Result<BigRational> {
    if coeffs.is_empty() || coeffs.iter().any(|a| !a.is_positive()) {
        return Err(invalid("partial quotients must be positive and non-empty"));
    }
    let mut x = BigRational::zero();
    for a in coeffs.iter().rev() {
        x = (BigRational::from_integer(a.clone()) + x).recip();
    }
    Ok(x)
}

/// A frequency α ∈ (0, 1), stored exactly as a rational (a deep convergent of
/// the intended irrational) together with its continued-fraction data.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency {
    value: BigRational,
    cf: Vec<BigInt>,
    convergents: Vec<Convergent>,
    dio: Option<(f64, f64)>,
}

impl Frequency {
    pub fn new(value: BigRational) -> Result<Self> {
        let (cf, convergents) = continued_fraction(&value, usize::MAX)?;
        Ok(Frequency { value, cf, convergents, dio: None })
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(invalid("denominator must be positive"));
        }
        Self::new(exact::rat(p, q))
    }

    pub fn from_coefficients(coeffs: &[u64]) -> Result<Self> {
        let c: Vec<BigInt> = coeffs.iter().map(|&a| BigInt::from(a)).collect();
        Self::new(from_coefficients(&c)?)
    }

    /// F_n/F_{n+1}: `depth` partial quotients of the golden mean's fractional part.
    pub fn golden(depth: usize) -> Result<Self> {
        Self::periodic(1, depth)
    }

    /// √2 − 1 = [0; 2, 2, 2, …].
    pub fn silver(depth: usize) -> Result<Self> {
        Self::periodic(2, depth)
    }

    /// [0; 3, 3, 3, …] = (√13 − 3)/2.
    pub fn bronze(depth: usize) -> Result<Self> {
        Self::periodic(3, depth)
    }

    fn periodic(a: u64, depth: usize) -> Result<Self> {
        if depth < 1 {
            return Err(invalid("convergent depth must be at least 1"));
        }
        let mut c = vec![a; depth];
        // keep the canonical form: the final quotient of a periodic-1 tail is folded
        if a == 1 && depth >= 2 {
            c.pop();
            *c.last_mut().unwrap() += 1;
        }
        Self::from_coefficients(&c)
    }

    /// Named Diophantine-like targets: `golden`, `silver`, `bronze`.
    pub fn named(name: &str, depth: usize) -> Result<Self> {
        match name {
            "golden" => Self::golden(depth),
            "silver" => Self::silver(depth),
            "bronze" => Self::bronze(depth),
            other => Err(invalid(format!("unknown frequency target '{other}'"))),
        }
    }

    /// Smallest golden convergent whose denominator is at least `min_den`.
    pub fn golden_with_denominator(min_den: u64) -> Result<Self> {
        let mut depth = 2;
        loop {
            let f = Self::golden(depth)?;
            if f.den() >= &BigInt::from(min_den) {
                return Ok(f);
            }
            depth += 1;
        }
    }

    /// A frequency with a prescribed near-commensurability: the expansion of
    /// p/q, then one large quotient chosen so that ‖qα‖ ≈ `target_norm`, then a
    /// golden tail of `tail` ones. Used to host two phase resonances K and
    /// K + q, which a purely golden frequency cannot do at desk scale.
    pub fn near_rational(p: u64, q: u64, target_norm: f64, tail: usize) -> Result<Self> {
        if !(target_norm > 0.0 && target_norm < 0.5 / q as f64) {
            return Err(invalid("target norm must lie in (0, 1/(2q))"));
        }
        let base = exact::rat(p as i64, q as i64);
        let (coeffs, convs) = continued_fraction(&base, usize::MAX)?;
        if convs.last().map(|c| c.1.clone()) != Some(BigInt::from(q)) {
            return Err(invalid("p/q must be in lowest terms"));
        }
        let q_prev = if convs.len() >= 2 { convs[convs.len() - 2].1.to_f64().unwrap() } else { 1.0 };
        let golden_tail = 0.618_033_988_749_895;
        let a = ((1.0 / target_norm - q_prev) / q as f64 - golden_tail).round().max(1.0) as u64;
        let mut c: Vec<u64> = coeffs.iter().map(|x| x.to_u64().unwrap()).collect();
        c.push(a);
        c.extend(std::iter::repeat(1).take(tail));
        if tail >= 1 {
            c.pop();
            *c.last_mut().unwrap() += 1;
        }
        Self::from_coefficients(&c)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }
    pub fn num(&self) -> &BigInt {
        self.value.numer()
    }
    pub fn den(&self) -> &BigInt {
        self.value.denom()
    }
    pub fn cf_coeffs(&self) -> &[BigInt] {
        &self.cf
    }
    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }
    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> {
        self.convergents.iter().map(|c| &c.1)
    }
    pub fn is_convergent_denominator(&self, q: u64) -> bool {
        let q = BigInt::from(q);
        self.denominators().any(|d| *d == q)
    }
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
    pub fn dio_params(&self) -> Option<(f64, f64)> {
        self.dio
    }

    /// Fit Diophantine constants (κ, τ) with κ = 1: τ = min q_n‖q_nα‖ over the
    /// non-terminal convergents. Convergents realise the minima of k‖kα‖, so
    /// this is the tightest τ consistent with the stored data.
    pub fn fit_diophantine(&mut self) -> Option<(f64, f64)> {
        let n = self.convergents.len();
        let tau = self.convergents[..n.saturating_sub(1)]
            .iter()
            .map(|(_, q)| {
                let qa = BigRational::from_integer(q.clone()) * &self.value;
                rational_to_f64(&(exact::torus_norm(&qa) * BigRational::from_integer(q.clone())))
            })
            .fold(f64::INFINITY, f64::min);
        self.dio = tau.is_finite().then_some((1.0, tau));
        self.dio
    }

    pub fn to_json(&self) -> FrequencyJson {
        FrequencyJson {
            num: self.num().to_string(),
            den: self.den().to_string(),
            cf_coeffs: self.cf.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn from_json(j: &FrequencyJson) -> Result<Self> {
        let n: BigInt = j.num.parse().map_err(|_| invalid("bad numerator"))?;
        let d: BigInt = j.den.parse().map_err(|_| invalid("bad denominator"))?;
        if !d.is_positive() {
            return Err(invalid("denominator must be positive"));
        }
        Self::new(BigRational::new(n, d))
    }
}

/// JSON form: exact integers as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FrequencyJson {
    pub num: String,
    pub den: String,
    pub cf_coeffs: Vec<String>,
}
