//! Regime classification over a small (ln λ, δ) grid, with the measured decay
//! and palindrome rates per cell.
//!
//! cargo run --release --example phase_diagram

use mathieu_lab::cli::pipelines::sweep_phase_diagram;
use mathieu_lab::cli::{ExperimentConfig, Kind};

fn main() -> mathieu_lab::Result<()> {
    let cfg = ExperimentConfig {
        kind: Kind::Sweep,
        sweep_ln_lambda: vec![0.2, 0.4, 0.8],
        sweep_delta: vec![0.3, 0.6],
        cell_eigenvectors: 16,
        ..ExperimentConfig::default()
    };
    let t = std::time::Instant::now();
    let rows = sweep_phase_diagram(&cfg)?;
    println!("ln λ    δ    δ̂       class                 eigvecs  decay  palin  consistent");
    for r in &rows {
        println!(
            "{:4} {:4} {:>7} {:>22} {:>7} {:>6} {:>6} {:?}",
            r.ln_lambda,
            r.delta_target,
            r.delta_hat.map_or("-".into(), |d| format!("{d:.3}")),
            r.classification.map_or("-".into(), |c| format!("{c:?}")),
            r.eigenvectors.map_or("-".into(), |n| n.to_string()),
            r.decay_rate.map_or("-".into(), |d| format!("{d:.2}")),
            r.palindrome_rate.map_or("-".into(), |d| format!("{d:.2}")),
            r.consistent,
        );
    }
    println!("({:.1?})", t.elapsed());
    Ok(())
}
