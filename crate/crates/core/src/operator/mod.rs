//! The almost Mathieu operator on ℤ and its finite-box machinery.
//!
//! Convention: (Hu)(n) = u(n+1) + u(n−1) + V(n)u(n) with the combined site
//! term V(n) = λ·v(θ + nα), v(y) = 2cos 2πy by default. The one-step transfer
//! matrix is then A(θ) = [[E − 2λcos 2πθ, −1], [1, 0]] and L(E) = ln λ on the
//! spectrum for λ > 1.

mod block;
mod determinant;
mod green;
mod regularity;
mod transfer;
mod uniformity;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{Frequency, Orbit, Phase};
use crate::error::{invalid, Result};
use crate::real::{Real, XReal, DEFAULT_PRECISION_BITS};

pub use block::{block_bound_check, BlockReport, Hypothesis};
pub use determinant::{determinant_logs, determinant_logs_at};
pub use green::{green_entry, Side};
pub use regularity::{regularity_check, Regularity};
pub use transfer::{transfer_norm_logs, transfer_product, TransferNorms};
pub use uniformity::{uniformity_product, Uniformity};

/// Even trigonometric polynomial v(y) = Σ_j c_j cos 2πjy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    cos: Vec<f64>,
}

impl TrigPolynomial {
    /// `cos[j]` multiplies cos 2πjy; any non-zero `sin` coefficient makes v odd
    /// in part and is rejected.
    pub fn new(cos: Vec<f64>, sin: &[f64]) -> Result<Self> {
        if sin.iter().any(|&s| s != 0.0) {
            return Err(invalid("potential must be even: sine coefficients must vanish"));
        }
        if cos.is_empty() || cos.iter().any(|c| !c.is_finite()) {
            return Err(invalid("cosine coefficients must be finite and non-empty"));
        }
        Ok(TrigPolynomial { cos })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn eval<R: Real>(&self, y: &BigRational, bits: usize) -> R {
        let mut acc = R::from_f64(self.cos[0], bits);
        for (j, &c) in self.cos.iter().enumerate().skip(1) {
            if c != 0.0 {
                let arg = y * BigRational::from_integer((j as i64).into());
                acc = acc.add(&R::cos_2pi(&arg, bits).mul_f64(c));
            }
        }
        acc
    }

    /// sup |v'| ≤ Σ 2πj|c_j|.
    pub fn lipschitz(&self) -> f64 {
        self.cos.iter().enumerate().map(|(j, c)| 2.0 * std::f64::consts::PI * j as f64 * c.abs()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// v = 2cos 2πy.
    Cosine,
    Trig(TrigPolynomial),
    /// v ≡ 0: the free Laplacian, for closed-form checks.
    Zero,
}

#[derive(Debug, Clone)]
pub struct OperatorParams {
    pub lambda: f64,
    pub ln_lambda: f64,
    pub alpha: Frequency,
    pub theta: Phase,
    pub energy: XReal,
    pub potential: PotentialKind,
    pub precision_bits: usize,
}

impl OperatorParams {
    pub fn new(ln_lambda: f64, alpha: Frequency, theta: Phase) -> Result<Self> {
        if !ln_lambda.is_finite() {
            return Err(invalid("ln λ must be finite"));
        }
        let lambda = ln_lambda.exp();
        Ok(OperatorParams {
            lambda,
            // the operator is defined by the stored λ; keep ln λ consistent with it
            ln_lambda: lambda.ln(),
            alpha,
            theta,
            energy: XReal::zero(DEFAULT_PRECISION_BITS),
            potential: PotentialKind::Cosine,
            precision_bits: DEFAULT_PRECISION_BITS,
        })
    }

    pub fn with_energy(mut self, e: XReal) -> Self {
        self.energy = e;
        self
    }

    pub fn with_energy_f64(self, e: f64) -> Self {
        let bits = self.precision_bits;
        self.with_energy(XReal::from_f64(e, bits))
    }

    pub fn with_potential(mut self, p: PotentialKind) -> Self {
        self.potential = p;
        self
    }

    pub fn with_precision(mut self, bits: usize) -> Self {
        self.precision_bits = bits;
        self.energy = Real::to_x(&self.energy, bits);
        self
    }

    pub fn theta_value(&self) -> &BigRational {
        &self.theta.value
    }

    fn orbit(&self) -> Orbit {
        Orbit::new(&self.theta.value, self.alpha.value())
    }

    fn site_at<R: Real>(&self, y: &BigRational) -> R {
        let bits = self.precision_bits;
        let lam = R::from_f64(self.lambda, bits);
        match &self.potential {
            PotentialKind::Cosine => R::cos_2pi(y, bits).mul(&lam).mul_f64(2.0),
            PotentialKind::Trig(t) => t.eval::<R>(y, bits).mul(&lam),
            PotentialKind::Zero => R::from_f64(0.0, bits),
        }
    }

    /// V(n) = λ·v(θ + nα).
    pub fn site<R: Real>(&self, n: i64) -> R {
        self.site_at(&self.orbit().point(n))
    }

    /// V(n) for lo ≤ n ≤ hi.
    pub fn potential_table<R: Real>(&self, lo: i64, hi: i64) -> Vec<R> {
        let orbit = self.orbit();
        (lo..=hi).map(|n| self.site_at(&orbit.point(n))).collect()
    }

    /// E − V(n) for lo ≤ n ≤ hi at the stored energy.
    pub fn diagonal_table<R: Real>(&self, lo: i64, hi: i64) -> Vec<R> {
        let e = R::from_x(&self.energy);
        self.potential_table::<R>(lo, hi).iter().map(|v| e.sub(v)).collect()
    }

    /// Lipschitz constant of y ↦ λ·v(y) on ℝ/ℤ.
    pub fn lipschitz(&self) -> f64 {
        match &self.potential {
            PotentialKind::Cosine => 4.0 * std::f64::consts::PI * self.lambda,
            PotentialKind::Trig(t) => self.lambda * t.lipschitz(),
            PotentialKind::Zero => 0.0,
        }
    }
}

/// The combined site value V(n) in double precision.
pub fn potential_value(params: &OperatorParams, n: i64) -> f64 {
    params.site::<f64>(n)
}
