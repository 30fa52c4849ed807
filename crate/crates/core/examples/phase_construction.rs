//! Planting resonances: a phase with ‖2θ + Kα‖ ≈ e^{−δK} at prescribed K, the
//! resulting resonance list, and the (x0, η) data the envelopes are built on.
//! On this frequency {20, 60} is not constructible: the correction planted at
//! 60 disturbs 20, and the error says so.
//!
//! cargo run --release --example phase_construction

use mathieu_lab::arithmetic::{construct_phase, find_resonances, locate_x0_eta, verify_construction, Frequency, ScanRange};

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    for ks in [&[][..], &[20][..], &[20, 60][..]] {
        match construct_phase(&alpha, 0.5, ks) {
            Ok(ph) => {
                println!(
                    "K = {ks:?}: θ ≈ {:.15}, δ̂ = {:.4} (at {}), verified {}",
                    ph.to_f64(),
                    ph.delta_hat,
                    ph.delta_argmax,
                    verify_construction(&ph, &alpha, 0.5, ks)?
                );
                for s in [0.1, 0.3] {
                    let r = find_resonances(&alpha, &ph.value, s, ScanRange::resonances(400)?)?;
                    println!("  ς = {s}: {:?}", r.entries.iter().map(|e| (e.k, (e.strength * 1000.0).round() / 1000.0)).collect::<Vec<_>>());
                }
                for ell in [5, 10, 20, 40, 100] {
                    let r = locate_x0_eta(&alpha, &ph.value, ell)?;
                    println!("  ℓ = {ell:3}: x0 = {:4}, η = {:.4}", r.x0, r.eta);
                }
            }
            Err(e) => println!("K = {ks:?}: {e}"),
        }
    }
    Ok(())
}
