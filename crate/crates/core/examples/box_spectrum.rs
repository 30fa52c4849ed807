//! Box spectra by Sturm bisection, the integrated density of states, and
//! eigenvector residuals.
//!
//! cargo run --release --example box_spectrum

use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::eigensolve::{box_eigenvalues_f64, eigenvector_profile, sturm_count, BoxSpec};
use mathieu_lab::operator::OperatorParams;
use mathieu_lab::XReal;

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::golden_with_denominator(24_000)?;
    let theta = construct_phase(&alpha, 0.5, &[20])?;
    for ll in [-0.5, 0.0, 0.5, 1.0] {
        let p = OperatorParams::new(ll, alpha.clone(), theta.clone())?;
        let bx = BoxSpec::centered(200);
        let v = p.potential_table::<f64>(bx.a, bx.b);
        let es = box_eigenvalues_f64(&p, bx, (f64::NEG_INFINITY, f64::INFINITY))?;
        let ids: Vec<String> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|e| format!("{:.3}", sturm_count(&v, e) as f64 / bx.size() as f64))
            .collect();
        println!("ln λ = {ll:4}: {} eigenvalues in [{:.4}, {:.4}], IDS at −2..2: {}", es.len(), es[0], es[es.len() - 1], ids.join(" "));
        let mid = &es[es.len() / 2];
        let prof = eigenvector_profile(&p, bx, &XReal::from_f64(*mid, 256))?;
        println!("  E = {mid:.12}: anchor {}, residual {:.1e}, glue mismatch {:.1e}", prof.anchor, prof.residual, prof.mismatch);
    }
    Ok(())
}
