//! Reflective hierarchy for a phase with two nested resonances K₁ = 20 and
//! K₂ = 120 on a near-rational frequency (‖100α‖ ≈ e^{−10}).
//!
//! cargo run --release --example hierarchy_tree

use mathieu_lab::arithmetic::{construct_phase, find_resonances, Frequency, ScanRange};
use mathieu_lab::asymptotics::{EnvelopeKind, EnvelopeModel};
use mathieu_lab::eigensolve::{find_centered_eigenvector, BoxSpec};
use mathieu_lab::hierarchy::{build_hierarchy, HierarchyOptions};
use mathieu_lab::operator::OperatorParams;
use num_rational::BigRational;

fn main() -> mathieu_lab::Result<()> {
    let (ks, delta, sigma) = ([20u64, 120], 0.5, 0.4);
    let mut picked = None;
    for p in [61u64, 39, 41, 59] {
        let alpha = Frequency::near_rational(p, 100, (-delta * 20.0f64).exp(), 12)?;
        if let Ok(th) = construct_phase(&alpha, delta, &ks) {
            picked = Some((alpha, th));
            break;
        }
    }
    let (alpha, theta) = picked.expect("no near-rational frequency hosts both resonances");
    println!("α ≈ {:.12} (den {}), resonances {:?}", alpha.to_f64(), alpha.den(), theta.resonances.entries);

    let params = OperatorParams::new(1.0, alpha.clone(), theta.clone())?;
    let t = std::time::Instant::now();
    let found = find_centered_eigenvector(&params, BoxSpec::centered(1200), 0, 5, 80, 2f64.powi(-200))?;
    let prof = &found.profile;
    let k0 = prof.anchor;
    println!("E = {:.12}, anchor {k0}, residual {:.1e} ({:.1?})", prof.energy.to_f64(), prof.residual, t.elapsed());

    let shifted = &theta.value + alpha.value() * BigRational::from_integer(k0.into());
    let res = find_resonances(&alpha, &shifted, sigma, ScanRange::resonances(400)?)?;
    let f = EnvelopeModel::new(EnvelopeKind::F, &alpha, &shifted, params.ln_lambda, 800)?;
    let window = prof.restrict(k0 - 800, k0 + 800)?;
    let report = build_hierarchy(&window, &res, &f, HierarchyOptions::new(2, sigma, 0.15))?;
    println!("resonances of θ + k₀α: {:?}; K̂_est = {:?}", report.resonances, report.k_hat_est);
    for n in &report.nodes {
        println!(
            "  path {:?}: predicted {}, window {}, radius {}, {:?}, found {:?}, similarity {:?}, sign {:?}",
            n.index_path.iter().map(|&j| report.resonances[j]).collect::<Vec<_>>(),
            n.predicted,
            n.window,
            n.search_radius,
            n.status,
            n.maximum.as_ref().map(|m| (m.position, m.deviation)),
            n.similarity.as_ref().map(|s| (s.range, (s.max_deviation * 100.0).round() / 100.0, s.pass)),
            n.sign_test.as_ref().map(|s| (s.verdict, s.predicted_deviation, s.other_deviation)),
        );
    }
    for ell in [0, 20, 40, 60, 80, 96, 98, 100, 102, 104, 110, 116, 118, 120, 122, 124, 140] {
        println!("  ℓ = {ell:4}: logU = {:9.3}, log f = {:9.3}", window.log_u_at(k0 + ell), f.get(ell));
    }
    Ok(())
}
