//! Continued fractions, resonance exponents and log-sine sums for a few
//! named frequencies.
//!
//! cargo run --release --example continued_fractions

use mathieu_lab::arithmetic::exact::rat;
use mathieu_lab::arithmetic::{ln_sin_sum, resonance_exponent, Frequency, Mode, ScanRange};

fn main() -> mathieu_lab::Result<()> {
    for (name, alpha) in [
        ("golden", Frequency::golden_with_denominator(6765)?),
        ("silver", Frequency::silver(12)?),
        ("bronze", Frequency::bronze(10)?),
        ("near 61/100", Frequency::near_rational(61, 100, 1e-6, 8)?),
    ] {
        let cf: Vec<String> = alpha.cf_coeffs().iter().map(|a| a.to_string()).collect();
        let qs: Vec<String> = alpha.denominators().map(|q| q.to_string()).collect();
        let (beta, at) = resonance_exponent(Mode::Beta, &alpha, None, ScanRange::tail(1000)?)?;
        println!("{name:12} α = {:.15}", alpha.to_f64());
        println!("  [0; {}]", cf.join(", "));
        println!("  q_n: {}", qs.join(" "));
        println!("  β̂ on 500 ≤ k ≤ 1000: {beta:.4} at k = {at}");
    }

    // Σ_{k≠k0} ln|sin π(x + kα)| + (q − 1) ln 2 stays O(ln q) at convergent denominators
    let alpha = Frequency::from_ratio(4181, 6765)?;
    println!("\n  q     x          sum       10 ln q");
    for q in [89u64, 233, 610, 1597] {
        for x in [rat(1, 7), rat(123_457, 1_000_003), rat(5, 11)] {
            let (s, k0) = ln_sin_sum(&x, &alpha, q)?;
            println!("{q:5} {:.6} {s:10.4} {:9.3}   (k0 = {k0})", mathieu_lab::arithmetic::exact::rational_to_f64(&x), 10.0 * (q as f64).ln());
        }
    }
    Ok(())
}
