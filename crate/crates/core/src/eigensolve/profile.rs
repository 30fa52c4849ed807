use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::logdomain::SignedLog;
use crate::real::XReal;

/// A solution φ on a window [lo, hi] in sign/log form, with
/// logU(ℓ) = ln‖(φ(ℓ), φ(ℓ−1))‖ normalised to 0 at `anchor`.
#[derive(Debug, Clone)]
pub struct SolutionProfile {
    pub lo: i64,
    pub hi: i64,
    pub sign: Vec<i8>,
    pub logmag_phi: Vec<f64>,
    pub log_u: Vec<f64>,
    pub anchor: i64,
    pub energy: XReal,
    /// Max per-site relative defect of (H − E)φ.
    pub residual: f64,
    /// Angle mismatch at the glue site (0 for one-sided propagation).
    pub mismatch: f64,
    pub glue: Option<i64>,
    /// Set when another box eigenvalue lies within the bracket tolerance.
    pub near_degenerate: bool,
}

impl SolutionProfile {
    /// Build from φ on [lo − 1, hi]; anchors at the global max of logU
    /// (leftmost on ties) and normalises there.
    pub fn from_phi(lo: i64, phi: &[SignedLog], energy: XReal) -> Self {
        let hi = lo + phi.len() as i64 - 2;
        let mut log_u = Vec::with_capacity(phi.len() - 1);
        for w in phi.windows(2) {
            log_u.push(crate::logdomain::logsumexp(2.0 * w[0].log, 2.0 * w[1].log) / 2.0);
        }
        let mut p = SolutionProfile {
            lo,
            hi,
            sign: phi[1..].iter().map(|s| s.sign).collect(),
            logmag_phi: phi[1..].iter().map(|s| s.log).collect(),
            log_u,
            anchor: lo,
            energy,
            residual: 0.0,
            mismatch: 0.0,
            glue: None,
            near_degenerate: false,
        };
        p.reanchor();
        p
    }

    /// Move the anchor to the global maximum of logU and renormalise.
    pub fn reanchor(&mut self) {
        let (i, _) = self
            .log_u
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        let shift = self.log_u[i];
        self.log_u.iter_mut().for_each(|v| *v -= shift);
        self.logmag_phi.iter_mut().for_each(|v| *v -= shift);
        self.anchor = self.lo + i as i64;
    }

    /// Put the anchor at `n` and normalise logU(n) = 0.
    pub fn normalize_at(&mut self, n: i64) {
        let shift = self.log_u_at(n);
        self.log_u.iter_mut().for_each(|v| *v -= shift);
        self.logmag_phi.iter_mut().for_each(|v| *v -= shift);
        self.anchor = n;
    }

    pub fn len(&self) -> usize {
        self.log_u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_u.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    fn idx(&self, n: i64) -> usize {
        assert!(self.contains(n), "site {n} outside profile window [{}, {}]", self.lo, self.hi);
        (n - self.lo) as usize
    }

    pub fn log_u_at(&self, n: i64) -> f64 {
        self.log_u[self.idx(n)]
    }

    pub fn phi(&self, n: i64) -> SignedLog {
        let i = self.idx(n);
        SignedLog::new(self.sign[i], self.logmag_phi[i])
    }

    /// φ(n) with zero outside the window.
    pub fn phi_or_zero(&self, n: i64) -> SignedLog {
        if self.contains(n) {
            self.phi(n)
        } else {
            SignedLog::ZERO
        }
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Sub-window [lo, hi]; the anchor and normalisation are kept.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<SolutionProfile> {
        if lo > hi || !self.contains(lo) || !self.contains(hi) {
            return Err(invalid(format!("window [{lo}, {hi}] not inside [{}, {}]", self.lo, self.hi)));
        }
        let (a, b) = (self.idx(lo), self.idx(hi) + 1);
        Ok(SolutionProfile {
            lo,
            hi,
            sign: self.sign[a..b].to_vec(),
            logmag_phi: self.logmag_phi[a..b].to_vec(),
            log_u: self.log_u[a..b].to_vec(),
            ..self.clone()
        })
    }

    /// Same profile re-indexed so that site `n` becomes `n − shift`.
    pub fn recentred(&self, shift: i64) -> SolutionProfile {
        SolutionProfile {
            lo: self.lo - shift,
            hi: self.hi - shift,
            anchor: self.anchor - shift,
            glue: self.glue.map(|g| g - shift),
            ..self.clone()
        }
    }

    /// Natural-log ℓ²-norm of φ over the window.
    pub fn log_l2_norm(&self) -> f64 {
        let twice: Vec<f64> = self.logmag_phi.iter().map(|v| 2.0 * v).collect();
        crate::logdomain::logsumexp_all(&twice) / 2.0
    }

    /// Header `site,sign,logmag_phi,logU`, floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["site", "sign", "logmag_phi", "logU"])?;
        for n in self.sites() {
            let i = self.idx(n);
            wr.write_record([
                n.to_string(),
                self.sign[i].to_string(),
                fmt17(self.logmag_phi[i]),
                fmt17(self.log_u[i]),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn save(&self, dir: &Path, stem: &str) -> Result<()> {
        self.write_csv(std::fs::File::create(dir.join(format!("{stem}.csv")))?)?;
        let meta = serde_json::to_string_pretty(&self.meta())?;
        std::fs::write(dir.join(format!("{stem}.json")), meta)?;
        Ok(())
    }

    pub fn meta(&self) -> ProfileMeta {
        ProfileMeta {
            window: (self.lo, self.hi),
            anchor: self.anchor,
            energy: self.energy.to_decimal_string(),
            precision_bits: self.energy.bits(),
            residual: self.residual,
            mismatch: self.mismatch,
            glue: self.glue,
            near_degenerate: self.near_degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub window: (i64, i64),
    pub anchor: i64,
    pub energy: String,
    pub precision_bits: usize,
    pub residual: f64,
    pub mismatch: f64,
    pub glue: Option<i64>,
    pub near_degenerate: bool,
}

/// Float formatting used by every CSV artifact: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
