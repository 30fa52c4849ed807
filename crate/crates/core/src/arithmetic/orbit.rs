use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact;

/// The exact orbit x + kα on ℝ/ℤ, held as integer residues over a common
/// denominator so that scans over k need only integer arithmetic.
#[derive(Debug, Clone)]
pub struct Orbit {
    den: BigInt,
    base: BigInt,
    step: BigInt,
}

impl Orbit {
    pub fn new(x: &BigRational, alpha: &BigRational) -> Self {
        let den = x.denom().lcm(alpha.denom());
        let base = (x.numer() * (&den / x.denom())).mod_floor(&den);
        let step = (alpha.numer() * (&den / alpha.denom())).mod_floor(&den);
        Orbit { den, base, step }
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Numerator of frac(x + kα) over `den`.
    pub fn residue(&self, k: i64) -> BigInt {
        (&self.base + &self.step * BigInt::from(k)).mod_floor(&self.den)
    }

    /// Numerator of ‖x + kα‖ over `den`.
    pub fn norm_numer(&self, k: i64) -> BigInt {
        let r = self.residue(k);
        let s = &self.den - &r;
        if s < r {
            s
        } else {
            r
        }
    }

    pub fn point(&self, k: i64) -> BigRational {
        BigRational::new(self.residue(k), self.den.clone())
    }

    pub fn norm(&self, k: i64) -> BigRational {
        BigRational::new(self.norm_numer(k), self.den.clone())
    }

    pub fn is_integer(&self, k: i64) -> bool {
        self.residue(k).is_zero()
    }

    pub fn ln_norm(&self, k: i64) -> f64 {
        let a = self.norm_numer(k);
        if a.is_zero() {
            f64::NEG_INFINITY
        } else {
            exact::ln_ratio(&a, &self.den)
        }
    }

    pub fn ln_abs_sin_pi(&self, k: i64) -> f64 {
        exact::ln_abs_sin_pi_norm(&self.norm_numer(k), &self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::exact::rat;

    #[test]
    fn orbit_matches_direct_reduction() {
        let x = rat(1, 3);
        let a = rat(4181, 6765);
        let o = Orbit::new(&x, &a);
        for k in [-50i64, -1, 0, 1, 7, 1000] {
            let direct = exact::torus_norm(&(&x + &a * BigRational::from_integer(k.into())));
            assert_eq!(o.norm(k), direct);
        }
    }
}
