use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mathieu_lab::cli::{default_out, error_json, run_experiment, selftest, ExperimentConfig, Kind, Outcome};
use mathieu_lab::Result;

#[derive(Parser)]
#[command(version, about = "Almost Mathieu operator laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat TOML experiment config; defaults are used for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: out/<subcommand>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fractions, β̂ and log-sine sums.
    Arith(Common),
    /// Construct and verify a phase with prescribed resonances.
    Phase(Common),
    /// Centered eigenvector and its envelope bounds.
    Eigen(Common),
    /// Transfer-matrix growth along the eigenvector.
    Transfer(Common),
    /// Local maxima hierarchy of the eigenvector.
    Hierarchy(Common),
    /// Regime classification plus diagnostics.
    Regime(Common),
    /// (ln λ, δ) phase diagram.
    Sweep(Common),
    /// Quick internal consistency checks.
    Selftest(Common),
}

fn setup(c: &Common, kind: Kind) -> Result<(ExperimentConfig, PathBuf)> {
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| mathieu_lab::Error::Config(e.to_string()))?;
    }
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.kind = kind;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(b) = c.precision_bits {
        cfg.precision_bits = b;
    }
    cfg.validate()?;
    let out = c.out.clone().unwrap_or_else(|| default_out(kind));
    Ok((cfg, out))
}

fn run(cli: Cli) -> Result<Outcome> {
    let (common, kind) = match cli.cmd {
        Cmd::Arith(c) => (c, Kind::Arith),
        Cmd::Phase(c) => (c, Kind::Phase),
        Cmd::Eigen(c) => (c, Kind::Eigen),
        Cmd::Transfer(c) => (c, Kind::Transfer),
        Cmd::Hierarchy(c) => (c, Kind::Hierarchy),
        Cmd::Regime(c) => (c, Kind::Regime),
        Cmd::Sweep(c) => (c, Kind::Sweep),
        Cmd::Selftest(c) => {
            setup(&c, Kind::Eigen)?;
            let checks = selftest()?;
            for ch in &checks {
                println!("{} {} ({:.3e} ≤ {:.1e})", if ch.pass { "PASS" } else { "FAIL" }, ch.name, ch.value, ch.tolerance);
            }
            return Ok(Outcome::from_bool(checks.iter().all(|c| c.pass)));
        }
    };
    let (cfg, out) = setup(&common, kind)?;
    let outcome = run_experiment(&cfg, &out)?;
    println!("{}: {:?} (artifacts in {})", serde_json::to_string(&kind).unwrap_or_default(), outcome, out.display());
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
