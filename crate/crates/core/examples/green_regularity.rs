//! Green's function entries and (τ, k)-regularity along an eigenvector: sites
//! far from the resonance are regular, the mirror of the anchor is not.
//!
//! cargo run --release --example green_regularity

use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::eigensolve::{find_centered_eigenvector, BoxSpec};
use mathieu_lab::operator::{green_entry, regularity_check, OperatorParams, Side};
use mathieu_lab::XReal;

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    let theta = construct_phase(&alpha, 0.5, &[20])?;
    let p = OperatorParams::new(1.0, alpha, theta)?;
    let found = find_centered_eigenvector(&p, BoxSpec::centered(400), 0, 5, 80, 2f64.powi(-200))?;
    let p = p.with_energy(found.profile.energy.clone());
    println!("E = {:.12}, anchor {}", found.profile.energy.to_f64(), found.profile.anchor);

    let (x1, x2) = (-40, 39);
    for y in [-30, -10, 0, 10, 20, 30] {
        let l = green_entry::<XReal>(&p, x1, x2, y, Side::Left)?;
        let r = green_entry::<XReal>(&p, x1, x2, y, Side::Right)?;
        println!("G_[{x1},{x2}]: ln|G(x1, {y:3})| = {:8.3}, ln|G({y:3}, x2)| = {:8.3}", l.log, r.log);
    }
    println!("\n   y  τ=0.80  τ=0.95");
    for y in (10..=30).step_by(2).chain([60, 100, -60]) {
        let a = regularity_check::<XReal>(&p, y, 0.8, 80)?;
        let b = regularity_check::<XReal>(&p, y, 0.95, 80)?;
        println!("{y:4} {:>7} {:>7}   {:?}", a.regular, b.regular, b.witness);
    }
    Ok(())
}
