use serde::{Deserialize, Serialize};

use super::OperatorParams;
use crate::logdomain::LogMat2;
use crate::real::Real;

/// A(θ + (m+k−1)α)···A(θ + mα), renormalised every step. For k < 0 this is
/// A_k(θ + mα) with A_{−j}(φ) = A_j(φ − jα)⁻¹, i.e. inverse one-step
/// matrices at sites m−1, m−2, …, m+k applied in that order. k = 0 is I.
pub fn transfer_product<R: Real>(params: &OperatorParams, k: i64, m: i64) -> LogMat2<R> {
    let bits = params.precision_bits;
    let mut acc = LogMat2::<R>::identity(bits);
    if k > 0 {
        let diag = params.diagonal_table::<R>(m, m + k - 1);
        for a in &diag {
            acc.step(a);
        }
    } else if k < 0 {
        let diag = params.diagonal_table::<R>(m + k, m - 1);
        for a in diag.iter().rev() {
            acc.step_inverse(a);
        }
    }
    acc
}

/// ln‖A_ℓ(θ)‖ for |ℓ| ≤ n, indexed from ℓ = −n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferNorms {
    pub n: i64,
    pub log_norm: Vec<f64>,
}

impl TransferNorms {
    pub fn get(&self, ell: i64) -> f64 {
        self.log_norm[(ell + self.n) as usize]
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        -self.n..=self.n
    }
}

/// All ln‖A_ℓ‖, |ℓ| ≤ n, by one forward and one backward sweep.
pub fn transfer_norm_logs<R: Real>(params: &OperatorParams, n: i64) -> TransferNorms {
    let bits = params.precision_bits;
    let n = n.max(0);
    let mut out = vec![0.0; (2 * n + 1) as usize];
    let diag = params.diagonal_table::<R>(-n, n - 1);
    let at = |site: i64| &diag[(site + n) as usize];
    let mut fwd = LogMat2::<R>::identity(bits);
    for ell in 1..=n {
        fwd.step(at(ell - 1));
        out[(ell + n) as usize] = fwd.norm_log();
    }
    let mut bwd = LogMat2::<R>::identity(bits);
    for ell in 1..=n {
        bwd.step_inverse(at(-ell));
        out[(n - ell) as usize] = bwd.norm_log();
    }
    TransferNorms { n, log_norm: out }
}
