use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{construct_phase, Frequency, Phase};
use crate::error::{Error, Result};
use crate::operator::OperatorParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Arith,
    Phase,
    Eigen,
    Transfer,
    Hierarchy,
    Regime,
    Sweep,
}

/// Flat key = value experiment description (TOML syntax, no tables). Every
/// field has a default; the resolved config is echoed into manifest.json.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,

    /// "golden" | "silver" | "bronze" | "p/q".
    pub frequency: String,
    /// Named frequencies: the first convergent with denominator ≥ this.
    pub min_denominator: u64,
    /// With an explicit p/q: extend its expansion so that ‖qα‖ ≈ near_norm.
    pub near_norm: Option<f64>,
    pub near_tail: usize,

    /// "constructed" | "p/q".
    pub phase: String,
    pub delta: f64,
    pub resonances: Vec<u64>,

    pub ln_lambda: f64,
    pub box_half_width: i64,
    pub window: i64,
    /// Accept the eigenvector whose global max is within this many sites of 0.
    pub center_offset: i64,
    pub probe_radius: i64,
    pub k_onset: i64,
    pub ell_max: i64,
    pub epsilon: f64,
    pub precision_bits: usize,
    pub seed: u64,

    pub density_epsilon: f64,
    pub last_simon_nats: f64,

    pub sigma: f64,
    pub max_depth: usize,
    pub hierarchy_c_range: f64,
    pub hierarchy_c0: f64,
    pub hierarchy_depth1_radius: i64,

    pub arith_q: Vec<u64>,
    pub arith_samples: usize,
    pub arith_c: f64,
    pub beta_k_max: u64,

    pub sc_half_width: i64,
    pub sc_bulk_fraction: f64,
    pub sc_epsilon: f64,
    pub sc_gap_threshold: f64,
    pub sc_c_max: f64,
    pub sc_pass_fraction: f64,
    pub decay_slope: f64,

    pub sweep_ln_lambda: Vec<f64>,
    pub sweep_delta: Vec<f64>,
    pub cell_half_width: i64,
    pub cell_eigenvectors: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: Kind::Eigen,
            frequency: "golden".into(),
            min_denominator: 24_000,
            near_norm: None,
            near_tail: 12,
            phase: "constructed".into(),
            delta: 0.5,
            resonances: vec![20],
            ln_lambda: 1.0,
            box_half_width: 1200,
            window: 800,
            center_offset: 5,
            probe_radius: 80,
            k_onset: 40,
            ell_max: 400,
            epsilon: 0.15,
            precision_bits: 256,
            seed: 0,
            density_epsilon: 0.1,
            last_simon_nats: 3.0,
            sigma: 0.4,
            max_depth: 2,
            hierarchy_c_range: 3.0,
            hierarchy_c0: 3.0,
            hierarchy_depth1_radius: 3,
            arith_q: vec![89, 233, 610, 1597],
            arith_samples: 100,
            arith_c: 10.0,
            beta_k_max: 1000,
            sc_half_width: 400,
            sc_bulk_fraction: 0.8,
            sc_epsilon: 0.1,
            sc_gap_threshold: 0.2,
            sc_c_max: 10.0,
            sc_pass_fraction: 0.8,
            decay_slope: 0.2,
            sweep_ln_lambda: vec![0.3, 0.6, 1.2],
            sweep_delta: vec![0.1, 0.5, 0.9],
            cell_half_width: 150,
            cell_eigenvectors: 24,
        }
    }
}

fn parse_ratio(s: &str) -> Option<(BigInt, BigInt)> {
    let (p, q) = s.split_once('/')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.window * 3 > self.box_half_width * 2 {
            return bad("window exceeds box budget");
        }
        if self.precision_bits < 128 {
            return bad("precision_bits must be at least 128");
        }
        if self.ell_max > self.window || self.k_onset < 1 || self.k_onset > self.ell_max {
            return bad("need 1 ≤ k_onset ≤ ell_max ≤ window");
        }
        if !(self.epsilon > 0.0 && self.density_epsilon > 0.0 && self.sigma > 0.0) {
            return bad("epsilon, density_epsilon and sigma must be positive");
        }
        if self.resonances.windows(2).any(|w| w[1] <= w[0]) {
            return bad("resonances must be strictly increasing");
        }
        if !(0.0 < self.sc_bulk_fraction && self.sc_bulk_fraction <= 1.0) {
            return bad("sc_bulk_fraction must lie in (0, 1]");
        }
        if self.kind == Kind::Sweep && (self.sweep_ln_lambda.is_empty() || self.sweep_delta.is_empty()) {
            return bad("sweep grid is empty");
        }
        Ok(())
    }

    pub fn build_frequency(&self) -> Result<Frequency> {
        let name = self.frequency.trim();
        if let Some((p, q)) = parse_ratio(name) {
            return match self.near_norm {
                Some(t) => {
                    let (p, q) = (p.try_into().ok(), q.try_into().ok());
                    let (Some(p), Some(q)) = (p, q) else {
                        return Err(Error::Config("near-rational p/q must fit in u64".into()));
                    };
                    Frequency::near_rational(p, q, t, self.near_tail)
                }
                None => Frequency::new(BigRational::new(p, q)),
            };
        }
        match name {
            "golden" => Frequency::golden_with_denominator(self.min_denominator),
            other => {
                // silver/bronze: smallest depth reaching the denominator target
                let mut depth = 2;
                loop {
                    let f = Frequency::named(other, depth)?;
                    if f.den() >= &BigInt::from(self.min_denominator) {
                        return Ok(f);
                    }
                    depth += 1;
                }
            }
        }
    }

    pub fn build_phase(&self, alpha: &Frequency) -> Result<Phase> {
        match parse_ratio(self.phase.trim()) {
            Some((p, q)) => Phase::explicit(alpha, &BigRational::new(p, q)),
            None if self.phase.trim() == "constructed" => construct_phase(alpha, self.delta, &self.resonances),
            None => Err(Error::Config(format!("unknown phase spec '{}'", self.phase))),
        }
    }

    pub fn build_params(&self) -> Result<(Frequency, Phase, OperatorParams)> {
        let alpha = self.build_frequency()?;
        let phase = self.build_phase(&alpha)?;
        let params = OperatorParams::new(self.ln_lambda, alpha.clone(), phase.clone())?.with_precision(self.precision_bits);
        Ok((alpha, phase, params))
    }
}
