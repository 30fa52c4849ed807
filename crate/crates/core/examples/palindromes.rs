//! Palindromic reflections of box eigenvectors in the regime ln λ < δ: the
//! Wronskian W(u, u(k − ·)) stays tiny and ‖Φ(0)‖ ≈ ‖Φ(k + 1)‖.
//!
//! cargo run --release --example palindromes

use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::operator::OperatorParams;
use mathieu_lab::sctest::{sc_transport_check, ScOptions};

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    let theta = construct_phase(&alpha, 0.6, &[20])?;
    let params = OperatorParams::new(0.3, alpha, theta.clone())?;
    println!("resonances {:?}, δ̂ = {:.3}", theta.resonances.entries, theta.delta_hat);

    let t = std::time::Instant::now();
    let rep = sc_transport_check(&params, &theta.resonances, theta.delta_hat, ScOptions::default())?;
    println!(
        "box [{}, {}]: {} bulk eigenvectors ({} failed) in {:.1?}",
        rep.box_spec.a,
        rep.box_spec.b,
        rep.tested,
        rep.failed_eigenvectors,
        t.elapsed()
    );
    for ((k, frac), (_, c)) in rep.pass_fraction.iter().zip(&rep.c_fit) {
        println!("  k = {k}: palindromic transport in {:.1}% of eigenvectors, fitted C = {c:.3}", 100.0 * frac);
    }
    for (k, n, frac) in &rep.near_resonance {
        println!("  k = {k}: {n} eigenvectors anchored near the reflection window, {:.1}% palindromic", 100.0 * frac);
    }
    println!("  eigenvectors passing the outer decay test: {}", rep.decaying);
    for r in rep.records.iter().step_by(rep.records.len().max(8) / 8) {
        let v = &r.verdicts[0];
        println!(
            "  E = {:8.4}: W_sup = {:.2e} (C = {:.2}), gap/‖Φ(0)‖ = {:.2e}, branch {:?}, slopes {:.3?}",
            r.energy,
            v.wronskian_sup,
            v.c_needed,
            v.relative_gap(),
            v.midpoint.branch,
            r.decay_slopes
        );
    }
    Ok(())
}
