//! Experiment runner: resolves a flat config, runs one pipeline and writes
//! manifest.json, report.json and CSV tables to an output directory.
//!
//! Exit-code contract: 0 pass, 2 verification failed, 1 tool error.

mod config;
pub mod pipelines;
mod selftest;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

pub use config::{ExperimentConfig, Kind};
pub use pipelines::{classify, Classification, RegimeVerdict, SweepRow};
pub use selftest::{selftest, SelfCheck};

use crate::arithmetic::{construct_phase, verify_construction, Phase};
use crate::eigensolve::fmt17;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
        }
    }
}

/// Machine-readable error record for standard error.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.to_string(), "kind": format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("") }).to_string()
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn phase_record(phase: &Phase) -> Value {
    serde_json::to_value(phase.to_json()).unwrap_or(Value::Null)
}

fn write_resonances(dir: &Path, phase: &Phase) -> Result<()> {
    let mut wr = csv::Writer::from_writer(create(dir, "resonances.csv")?);
    wr.write_record(["k", "strength"])?;
    for e in &phase.resonances.entries {
        wr.write_record([e.k.to_string(), fmt17(e.strength)])?;
    }
    wr.flush()?;
    Ok(())
}

struct Run {
    outcome: Outcome,
    report: Value,
    fitted: Value,
}

/// Run the configured experiment, writing every artifact into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let run = match cfg.kind {
        Kind::Arith => run_arith(cfg, out)?,
        Kind::Phase => run_phase(cfg, out)?,
        Kind::Eigen => run_eigen(cfg, out)?,
        Kind::Transfer => run_transfer(cfg, out)?,
        Kind::Hierarchy => run_hierarchy(cfg, out)?,
        Kind::Regime => run_regime(cfg, out)?,
        Kind::Sweep => run_sweep(cfg, out)?,
    };
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "kind": cfg.kind,
        "config": cfg,
        "fitted": run.fitted,
        "outcome": if run.outcome == Outcome::Pass { "pass" } else { "fail" },
    });
    write_json(out, "manifest.json", &manifest)?;
    write_json(out, "report.json", &run.report)?;
    Ok(run.outcome)
}

fn run_arith(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let alpha = cfg.build_frequency()?;
    let r = pipelines::arith_run(cfg, &alpha)?;
    let mut wr = csv::Writer::from_writer(create(out, "convergents.csv")?);
    wr.write_record(["n", "a_n", "p_n", "q_n"])?;
    for (i, (a, c)) in alpha.cf_coeffs().iter().zip(alpha.convergents()).enumerate() {
        wr.write_record([i.to_string(), a.to_string(), c.0.to_string(), c.1.to_string()])?;
    }
    wr.flush()?;
    let mut wr = csv::Writer::from_writer(create(out, "ln_sin_sums.csv")?);
    wr.write_record(["q", "x_num", "x_den", "value", "bound", "k0"])?;
    for s in &r.samples {
        wr.write_record([s.q.to_string(), s.x_num.clone(), s.x_den.clone(), fmt17(s.value), fmt17(s.bound), s.k0.to_string()])?;
    }
    wr.flush()?;
    let worst = r.samples.iter().map(|s| s.value.abs() / s.bound).fold(0.0, f64::max);
    Ok(Run {
        outcome: Outcome::from_bool(r.pass),
        report: json!({
            "frequency": alpha.to_json(),
            "beta_hat": r.beta_hat,
            "beta_argmax": r.beta_argmax,
            "samples": r.samples.len(),
            "worst_ratio_to_bound": worst,
            "pass": r.pass,
        }),
        fitted: json!({ "beta_hat": r.beta_hat }),
    })
}

fn run_phase(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let alpha = cfg.build_frequency()?;
    let phase = cfg.build_phase(&alpha)?;
    let ok = if cfg.phase.trim() == "constructed" {
        verify_construction(&phase, &alpha, cfg.delta, &cfg.resonances)?
    } else {
        !phase.excluded
    };
    write_resonances(out, &phase)?;
    Ok(Run {
        outcome: Outcome::from_bool(ok),
        report: json!({ "frequency": alpha.to_json(), "phase": phase_record(&phase), "verified": ok }),
        fitted: json!({ "delta_hat": phase.delta_hat }),
    })
}

fn envelope_artifacts(out: &Path, env: &pipelines::EnvelopeRun) -> Result<()> {
    env.window.write_csv(create(out, "profile.csv")?)?;
    env.bound.write_csv(create(out, "f_bounds.csv")?)?;
    write_resonances(out, &env.shifted)
}

fn run_eigen(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let env = pipelines::envelope_run(cfg)?;
    let dens = pipelines::density_run(cfg, &env, None)?;
    envelope_artifacts(out, &env)?;
    Ok(Run {
        outcome: Outcome::from_bool(env.bound.verdict),
        report: json!({
            "profile": env.window.meta(),
            "anchor": env.k0,
            "phase": phase_record(&env.phase),
            "f_bounds": env.bound.summary_json(),
            "density": dens,
        }),
        fitted: json!({ "delta_hat": env.phase.delta_hat, "onset_k": cfg.k_onset, "anchor": env.k0 }),
    })
}

fn run_transfer(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let env = pipelines::envelope_run(cfg)?;
    let tr = pipelines::transfer_run(cfg, &env)?;
    let dens = pipelines::density_run(cfg, &env, Some(&tr))?;
    envelope_artifacts(out, &env)?;
    tr.bound.write_csv(create(out, "g_bounds.csv")?)?;
    let mut wr = csv::Writer::from_writer(create(out, "transfer.csv")?);
    wr.write_record(["ell", "log_norm_A", "log_norm_A_Utilde", "log_g"])?;
    for ell in tr.norms.range() {
        wr.write_record([
            ell.to_string(),
            fmt17(tr.norms.get(ell)),
            fmt17(tr.independent.log_u_at(ell)),
            fmt17(tr.g_model.get(ell)),
        ])?;
    }
    wr.flush()?;
    Ok(Run {
        outcome: Outcome::from_bool(tr.pass()),
        report: json!({
            "anchor": env.k0,
            "energy": env.window.meta().energy,
            "g_bounds": tr.bound.summary_json(),
            "last_simon": { "max_gap": tr.last_simon_max, "min_gap": tr.last_simon_min, "limit": cfg.last_simon_nats, "pass": tr.last_simon_pass },
            "density": dens,
        }),
        fitted: json!({ "delta_hat": env.phase.delta_hat, "onset_k": cfg.k_onset, "anchor": env.k0 }),
    })
}

fn run_hierarchy(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let h = pipelines::hierarchy_run(cfg)?;
    envelope_artifacts(out, &h.env)?;
    h.report.write_csv(create(out, "hierarchy.csv")?)?;
    Ok(Run {
        outcome: Outcome::from_bool(h.checks.pass),
        report: json!({ "hierarchy": h.report, "checks": h.checks }),
        fitted: json!({
            "k_hat_est": h.report.k_hat_est,
            "delta_hat": h.env.phase.delta_hat,
            "onset_k": cfg.k_onset,
            "anchor": h.env.k0,
        }),
    })
}

fn run_regime(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let (_, phase, params) = cfg.build_params()?;
    let v = pipelines::regime_verdict(cfg, &params, &phase, cfg.sc_half_width, None)?;
    let mut report = json!({ "verdict": v, "phase": phase_record(&phase) });
    let mut pass = v.consistent.unwrap_or(true);
    if v.classification == Classification::SingularContinuous {
        let sc = pipelines::sc_run(cfg, &params, &phase)?;
        let mut wr = csv::Writer::from_writer(create(out, "palindromes.csv")?);
        wr.write_record(["energy", "anchor", "k", "wronskian_sup", "c_needed", "transport_gap", "phi0_norm", "branch", "decays"])?;
        for r in &sc.report.records {
            for p in &r.verdicts {
                wr.write_record([
                    fmt17(r.energy),
                    r.anchor.to_string(),
                    p.k.to_string(),
                    fmt17(p.wronskian_sup),
                    fmt17(p.c_needed),
                    fmt17(p.transport_gap),
                    fmt17(p.phi0_norm),
                    format!("{:?}", p.midpoint.branch).to_lowercase(),
                    r.decays.to_string(),
                ])?;
            }
        }
        wr.flush()?;
        report["sc"] = json!({
            "pass_fraction": sc.pass_fraction,
            "c_fit": sc.c_fit,
            "decaying": sc.report.decaying,
            "tested": sc.report.tested,
            "near_resonance": sc.report.near_resonance,
            "pass": sc.pass,
        });
        pass &= sc.pass;
    }
    Ok(Run { outcome: Outcome::from_bool(pass), report, fitted: json!({ "delta_hat": phase.delta_hat }) })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn run_sweep(cfg: &ExperimentConfig, out: &Path) -> Result<Run> {
    let rows = pipelines::sweep_phase_diagram(cfg)?;
    let mut wr = csv::Writer::from_writer(create(out, "sweep.csv")?);
    wr.write_record([
        "ln_lambda",
        "delta_target",
        "delta_hat",
        "classification",
        "eigenvectors",
        "decay_rate",
        "palindrome_rate",
        "consistent",
        "error",
    ])?;
    for r in &rows {
        let class = r.classification.map(|c| serde_json::to_value(c).unwrap().as_str().unwrap_or("").to_string());
        wr.write_record([
            fmt17(r.ln_lambda),
            fmt17(r.delta_target),
            r.delta_hat.map(fmt17).unwrap_or_default(),
            class.unwrap_or_default(),
            opt(&r.eigenvectors),
            r.decay_rate.map(fmt17).unwrap_or_default(),
            r.palindrome_rate.map(fmt17).unwrap_or_default(),
            opt(&r.consistent),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    wr.flush()?;
    let pass = rows.iter().all(|r| r.error.is_none() && r.consistent != Some(false));
    Ok(Run {
        outcome: Outcome::from_bool(pass),
        report: json!({ "cells": rows }),
        fitted: json!({ "delta_hat": rows.iter().map(|r| r.delta_hat).collect::<Vec<_>>() }),
    })
}

/// Construct a phase directly (used by the `phase` subcommand without a
/// config file).
pub fn quick_phase(cfg: &ExperimentConfig) -> Result<Phase> {
    construct_phase(&cfg.build_frequency()?, cfg.delta, &cfg.resonances)
}

/// Default output directory for a kind.
pub fn default_out(kind: Kind) -> PathBuf {
    PathBuf::from("out").join(serde_json::to_value(kind).unwrap().as_str().unwrap_or("run"))
}
