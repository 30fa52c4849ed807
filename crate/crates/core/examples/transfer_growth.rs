//! Transfer-matrix growth at an eigenvalue: ln‖A_ℓ‖ against the envelope g,
//! the Lyapunov slope, and the solution orthogonal to the eigenvector.
//!
//! cargo run --release --example transfer_growth

use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::asymptotics::{EnvelopeKind, EnvelopeModel};
use mathieu_lab::eigensolve::{find_centered_eigenvector, solution_profile, BoxSpec};
use mathieu_lab::logdomain::LogVec2;
use mathieu_lab::operator::{transfer_norm_logs, OperatorParams};
use mathieu_lab::XReal;

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    let theta = construct_phase(&alpha, 0.5, &[20])?;
    let params = OperatorParams::new(1.0, alpha.clone(), theta.clone())?;
    let found = find_centered_eigenvector(&params, BoxSpec::centered(600), 0, 5, 80, 2f64.powi(-200))?;
    let k0 = found.profile.anchor;
    let shifted = theta.shifted(&alpha, k0)?;
    let p = OperatorParams::new(1.0, alpha.clone(), shifted.clone())?.with_energy(found.profile.energy.clone());

    let n = 300;
    let norms = transfer_norm_logs::<XReal>(&p, n);
    let g = EnvelopeModel::new(EnvelopeKind::G, &alpha, &shifted.value, 1.0, n)?;
    let (u0, u1) = (found.profile.phi(k0).to_f64(), found.profile.phi(k0 - 1).to_f64());
    let h = u0.hypot(u1);
    let other = solution_profile::<XReal>(&p, &LogVec2::from_f64(-u1 / h, u0 / h, 256), n);

    println!("E = {:.12}, anchor {k0}", found.profile.energy.to_f64());
    println!("    ℓ   ln‖A_ℓ‖     g(ℓ)   ln‖A_ℓ‖/ℓ   ln‖A_ℓ‖ − ln‖A_ℓŨ‖");
    for ell in [-300, -100, -40, 10, 20, 30, 40, 60, 100, 200, 300] {
        println!(
            "{ell:5} {:9.3} {:8.3} {:10.4} {:12.2e}",
            norms.get(ell),
            g.get(ell),
            norms.get(ell) / (ell.abs() as f64),
            norms.get(ell) - other.log_u_at(ell)
        );
    }
    Ok(())
}
