//! Eigenfunction decay against the universal envelope f for a phase with one
//! planted resonance.
//!
//! cargo run --release --example envelope_decay

use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::asymptotics::{verify_bounds, EnvelopeKind, EnvelopeModel, LogSeries};
use mathieu_lab::eigensolve::{find_centered_eigenvector, BoxSpec};
use mathieu_lab::operator::OperatorParams;

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    let theta = construct_phase(&alpha, 0.5, &[20])?;
    println!("θ resonances: {:?}, δ̂ = {:.4}", theta.resonances.entries, theta.delta_hat);
    let params = OperatorParams::new(1.0, alpha.clone(), theta.clone())?;

    let t = std::time::Instant::now();
    let found = find_centered_eigenvector(&params, BoxSpec::centered(1200), 0, 5, 80, 2f64.powi(-200))?;
    let prof = &found.profile;
    println!(
        "E = {:.15}, anchor = {}, residual = {:.2e}, mismatch = {:.2e} ({:.1?})",
        prof.energy.to_f64(),
        prof.anchor,
        prof.residual,
        prof.mismatch,
        t.elapsed()
    );

    let k0 = prof.anchor;
    let shifted = &theta.value + alpha.value() * num_rational::BigRational::from_integer(k0.into());
    let model = EnvelopeModel::new(EnvelopeKind::F, &alpha, &shifted, params.ln_lambda, 800)?;
    let window = prof.restrict(k0 - 800, k0 + 800)?;
    let report = verify_bounds(&LogSeries::from(&window), &model, 0.15, 40, 400)?;
    println!(
        "f-envelope on 40 ≤ |ℓ| ≤ 400: {} (worst slacks {:.3} / {:.3})",
        if report.verdict { "pass" } else { "fail" },
        report.worst_upper_slack,
        report.worst_lower_slack
    );
    for ell in [-400, -200, -60, -40, -20, -10, -5, -2, -1, 0, 1, 2, 5, 10, 15, 18, 20, 22, 25, 30, 40, 60, 100, 200, 400] {
        println!("  ℓ = {ell:5}: logU = {:9.3}, log f = {:9.3}", window.log_u_at(k0 + ell), model.get(ell));
    }
    Ok(())
}
