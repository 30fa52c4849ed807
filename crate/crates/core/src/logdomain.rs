//! Sign/log scalars and renormalised 2×2 products.
//!
//! Transfer-matrix entries for ln λ = 1 overflow f64 after ~700 steps; here
//! every product carries a binary exponent and a mantissa block whose largest
//! entry stays in [1/2, 1).

use serde::{Deserialize, Serialize};

use crate::real::Real;

const LN2: f64 = std::f64::consts::LN_2;

/// ln(e^a + e^b), exact for infinite arguments.
pub fn logsumexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

pub fn logsumexp_all(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// sign · e^{log}; zero is (0, −∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    pub sign: i8,
    pub log: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, log: f64::NEG_INFINITY };

    pub fn new(sign: i8, log: f64) -> Self {
        if sign == 0 || log == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog { sign: sign.signum(), log }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x.signum() as i8 * (x != 0.0) as i8, x.abs().ln())
    }

    pub fn from_real<R: Real>(x: &R, exp2: i64) -> Self {
        Self::new(x.signum(), x.ln_abs() + exp2 as f64 * LN2)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.log.exp()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.sign * o.sign, self.log + o.log)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.sign * o.sign, self.log - o.log)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.sign, self.log)
    }

    /// Sum with the smaller magnitude rescaled to the larger one before adding,
    /// so cancellation is resolved at matched scale.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let m = self.log.max(o.log);
        let v = self.sign as f64 * (self.log - m).exp() + o.sign as f64 * (o.log - m).exp();
        if v == 0.0 {
            Self::ZERO
        } else {
            Self::new(v.signum() as i8, m + v.abs().ln())
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

/// e^{exp2·ln2} · m for a 2×2 block m.
#[derive(Debug, Clone)]
pub struct LogMat2<R: Real = f64> {
    pub m: [[R; 2]; 2],
    pub exp2: i64,
}

impl<R: Real> LogMat2<R> {
    pub fn identity(bits: usize) -> Self {
        let o = R::from_f64(1.0, bits);
        let z = R::from_f64(0.0, bits);
        LogMat2 { m: [[o.clone(), z.clone()], [z, o]], exp2: 0 }
    }

    /// The one-step matrix [[a, −1], [1, 0]].
    pub fn one_step(a: &R) -> Self {
        let bits = a.precision();
        let mut s = LogMat2 {
            m: [[a.clone(), R::from_f64(-1.0, bits)], [R::from_f64(1.0, bits), R::from_f64(0.0, bits)]],
            exp2: 0,
        };
        s.renormalize();
        s
    }

    /// self ← [[a, −1], [1, 0]] · self.
    pub fn step(&mut self, a: &R) {
        let r0 = [a.mul(&self.m[0][0]).sub(&self.m[1][0]), a.mul(&self.m[0][1]).sub(&self.m[1][1])];
        let r1 = [self.m[0][0].clone(), self.m[0][1].clone()];
        self.m = [r0, r1];
        self.renormalize();
    }

    /// self ← [[a, −1], [1, 0]]⁻¹ · self = [[0, 1], [−1, a]] · self.
    pub fn step_inverse(&mut self, a: &R) {
        let r0 = [self.m[1][0].clone(), self.m[1][1].clone()];
        let r1 = [a.mul(&self.m[1][0]).sub(&self.m[0][0]), a.mul(&self.m[1][1]).sub(&self.m[0][1])];
        self.m = [r0, r1];
        self.renormalize();
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.m[i][0].mul(&o.m[0][j]).add(&self.m[i][1].mul(&o.m[1][j]));
        let mut r = LogMat2 { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], exp2: self.exp2 + o.exp2 };
        r.renormalize();
        r
    }

    pub fn renormalize(&mut self) {
        let e = self.m.iter().flatten().filter_map(|x| x.exponent2()).max();
        if let Some(e) = e {
            if e != 0 {
                for row in self.m.iter_mut() {
                    for x in row.iter_mut() {
                        *x = x.ldexp(-e);
                    }
                }
                self.exp2 += e;
            }
        }
    }

    /// Natural-log scale of the block.
    pub fn log_scale(&self) -> f64 {
        self.exp2 as f64 * LN2
    }

    pub fn entry(&self, i: usize, j: usize) -> SignedLog {
        SignedLog::from_real(&self.m[i][j], self.exp2)
    }

    pub fn block_f64(&self) -> [[f64; 2]; 2] {
        [[self.m[0][0].to_f64(), self.m[0][1].to_f64()], [self.m[1][0].to_f64(), self.m[1][1].to_f64()]]
    }

    /// ln of the operator (spectral) norm.
    pub fn norm_log(&self) -> f64 {
        let [[a, b], [c, d]] = self.block_f64();
        let s = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
        0.5 * ((s + disc) / 2.0).ln() + self.log_scale()
    }

    /// ln|det| of the represented matrix, computed in the working precision.
    pub fn det_log(&self) -> f64 {
        let det = self.m[0][0].mul(&self.m[1][1]).sub(&self.m[0][1].mul(&self.m[1][0]));
        det.ln_abs() + 2.0 * self.log_scale()
    }

    pub fn apply(&self, v: &LogVec2<R>) -> LogVec2<R> {
        let x = self.m[0][0].mul(&v.v[0]).add(&self.m[0][1].mul(&v.v[1]));
        let y = self.m[1][0].mul(&v.v[0]).add(&self.m[1][1].mul(&v.v[1]));
        let mut r = LogVec2 { v: [x, y], exp2: self.exp2 + v.exp2 };
        r.renormalize();
        r
    }

    /// Entrywise comparison in log form: max |Δlog| over non-negligible entries
    /// and whether the signs agree. Entries more than `floor` nats below the
    /// largest are ignored (they carry no relative information).
    pub fn log_distance(&self, o: &Self, floor: f64) -> (f64, bool) {
        let top = self.norm_log();
        let mut worst = 0.0f64;
        let mut signs = true;
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = (self.entry(i, j), o.entry(i, j));
                if a.log < top - floor && b.log < top - floor {
                    continue;
                }
                signs &= a.sign == b.sign;
                worst = worst.max((a.log - b.log).abs());
            }
        }
        (worst, signs)
    }
}

/// e^{exp2·ln2} · (v0, v1).
#[derive(Debug, Clone)]
pub struct LogVec2<R: Real = f64> {
    pub v: [R; 2],
    pub exp2: i64,
}

impl<R: Real> LogVec2<R> {
    pub fn new(x: R, y: R) -> Self {
        let mut r = LogVec2 { v: [x, y], exp2: 0 };
        r.renormalize();
        r
    }

    pub fn from_f64(x: f64, y: f64, bits: usize) -> Self {
        Self::new(R::from_f64(x, bits), R::from_f64(y, bits))
    }

    pub fn renormalize(&mut self) {
        let e = self.v.iter().filter_map(|x| x.exponent2()).max();
        if let Some(e) = e {
            if e != 0 {
                self.v = [self.v[0].ldexp(-e), self.v[1].ldexp(-e)];
                self.exp2 += e;
            }
        }
    }

    /// U(n) = (φ(n), φ(n−1)) ↦ U(n+1) with a = E − V(n).
    pub fn step(&mut self, a: &R) {
        let x = a.mul(&self.v[0]).sub(&self.v[1]);
        let y = self.v[0].clone();
        self.v = [x, y];
        self.renormalize();
    }

    /// U(n+1) ↦ U(n) with a = E − V(n).
    pub fn step_back(&mut self, a: &R) {
        let x = self.v[1].clone();
        let y = a.mul(&self.v[1]).sub(&self.v[0]);
        self.v = [x, y];
        self.renormalize();
    }

    pub fn norm_log(&self) -> f64 {
        let (a, b) = (self.v[0].to_f64(), self.v[1].to_f64());
        0.5 * (a * a + b * b).ln() + self.exp2 as f64 * LN2
    }

    pub fn component(&self, i: usize) -> SignedLog {
        SignedLog::from_real(&self.v[i], self.exp2)
    }

    /// |sin| of the angle between two vectors.
    pub fn sin_angle(&self, o: &Self) -> f64 {
        let (a, b) = (self.v[0].to_f64(), self.v[1].to_f64());
        let (c, d) = (o.v[0].to_f64(), o.v[1].to_f64());
        let det = self.v[0].mul(&o.v[1]).sub(&self.v[1].mul(&o.v[0])).to_f64();
        det.abs() / ((a * a + b * b).sqrt() * (c * c + d * d).sqrt())
    }

    /// Signed det(self, o) of the normalised blocks.
    pub fn cross_sign(&self, o: &Self) -> i8 {
        self.v[0].mul(&o.v[1]).sub(&self.v[1].mul(&o.v[0])).signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_log_arithmetic() {
        let a = SignedLog::from_f64(3.0);
        let b = SignedLog::from_f64(-5.0);
        assert!((a.add(&b).to_f64() + 2.0).abs() < 1e-14);
        assert!((a.mul(&b).to_f64() + 15.0).abs() < 1e-13);
        assert!(a.sub(&a).is_zero());
        assert!((logsumexp(-15.0, -30.0) + 15.0 - (-15f64).exp()).abs() < 1e-12);
        assert!((logsumexp(-20.0, -20.0) - (-20.0 + 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn renormalised_product_has_unit_determinant() {
        let mut m: LogMat2<f64> = LogMat2::identity(53);
        for i in 0..2000 {
            m.step(&(3.0 * (i as f64 * 0.7).cos()));
        }
        assert!(m.log_scale() > 100.0);
        let top = m.block_f64().iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((0.5..1.0).contains(&top));
        // det = 1 is only resolvable while the block is not numerically rank one
        let mut short: LogMat2<f64> = LogMat2::identity(53);
        for i in 0..10 {
            short.step(&(3.0 * (i as f64 * 0.7).cos()));
        }
        assert!(short.det_log().abs() < 1e-8);
        let mut long: LogMat2<crate::XReal> = LogMat2::identity(512);
        for i in 0..200 {
            long.step(&crate::XReal::from_f64(3.0 * (i as f64 * 0.7).cos(), 512));
        }
        assert!(long.log_scale() > 50.0);
        assert!(long.det_log().abs() < 1e-12);
    }
}
