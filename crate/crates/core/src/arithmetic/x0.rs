use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::frequency::Frequency;
use super::orbit::Orbit;
use crate::error::{invalid, Result};

/// The resonance minimiser for scale ℓ and its exponent η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct X0Eta {
    pub x0: i64,
    /// |sin π(2θ + x0α)| = e^{−η|ℓ|}; 0 when `integer_hit`.
    pub eta: f64,
    pub integer_hit: bool,
}

/// x0 minimising |sin π(2θ + xα)| over |x| ≤ 2|ℓ| (ties: smaller |x|, then
/// positive), and η from |sin π(2θ + x0α)| = e^{−η|ℓ|}.
pub fn locate_x0_eta(alpha: &Frequency, theta: &BigRational, ell: i64) -> Result<X0Eta> {
    if ell == 0 {
        return Err(invalid("ℓ must be non-zero"));
    }
    Ok(X0Table::new(alpha, theta, ell.unsigned_abs())?.get(ell))
}

/// Precomputed x0/η for all 1 ≤ |ℓ| ≤ max_ell. The minimiser over the radius
/// 2|ℓ| is piecewise constant in ℓ, so one prefix scan serves every scale.
#[derive(Debug, Clone)]
pub struct X0Table {
    max_ell: u64,
    /// best[r] = (x, ln|sin π(2θ + xα)|) over |x| ≤ r.
    best: Vec<(i64, f64)>,
}

impl X0Table {
    pub fn new(alpha: &Frequency, theta: &BigRational, max_ell: u64) -> Result<Self> {
        if max_ell == 0 {
            return Err(invalid("max |ℓ| must be positive"));
        }
        let orbit = Orbit::new(&(theta * BigRational::from_integer(2.into())), alpha.value());
        let r_max = 2 * max_ell as i64;
        let mut best = Vec::with_capacity(r_max as usize + 1);
        let mut cur: (i64, BigInt) = (0, orbit.norm_numer(0));
        let mut cur_ln = orbit.ln_abs_sin_pi(0);
        best.push((0, cur_ln));
        for r in 1..=r_max {
            for x in [r, -r] {
                let n = orbit.norm_numer(x);
                if n < cur.1 {
                    cur = (x, n);
                    cur_ln = orbit.ln_abs_sin_pi(x);
                }
            }
            best.push((cur.0, cur_ln));
        }
        Ok(X0Table { max_ell, best })
    }

    pub fn max_ell(&self) -> u64 {
        self.max_ell
    }

    /// Panics if ℓ = 0 or |ℓ| exceeds the table range.
    pub fn get(&self, ell: i64) -> X0Eta {
        let m = ell.unsigned_abs();
        assert!(m >= 1 && m <= self.max_ell, "ℓ = {ell} outside X0 table");
        let (x0, ln_sin) = self.best[2 * m as usize];
        if ln_sin == f64::NEG_INFINITY {
            X0Eta { x0, eta: 0.0, integer_hit: true }
        } else {
            X0Eta { x0, eta: -ln_sin / m as f64, integer_hit: false }
        }
    }
}
