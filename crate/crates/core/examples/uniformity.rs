//! Lagrange-interpolation uniformity of orbit samples θ + jα: ε stays small for
//! a generic phase and tracks γ when ‖2θ + kα‖ is planted to be tiny.
//!
//! cargo run --release --example uniformity

use mathieu_lab::arithmetic::exact::{frac, rat};
use mathieu_lab::arithmetic::{construct_phase, Frequency};
use mathieu_lab::operator::uniformity_product;
use num_rational::BigRational;

fn samples(alpha: &Frequency, theta: &BigRational, js: &[i64]) -> Vec<BigRational> {
    js.iter().map(|&j| frac(&(theta + alpha.value() * rat(j, 1)))).collect()
}

fn main() -> mathieu_lab::Result<()> {
    let alpha = Frequency::from_ratio(4181, 6765)?;
    let js: Vec<i64> = (0..16).chain(40..58).collect();
    let generic = construct_phase(&alpha, 0.5, &[])?;
    let u = uniformity_product(&samples(&alpha, &generic.value, &js), 4000)?;
    println!("generic θ: ε = {:.4} (certified ≤ {:.4}), argmax i = {}", u.epsilon, u.upper, u.argmax_i);

    // ‖2θ + 20α‖ = e^{−γ·34} for a few γ
    for gamma in [0.1, 0.3, 0.5, 0.8] {
        let r = BigRational::from_float((-gamma * 34.0f64).exp()).unwrap();
        let theta = frac(&(frac(&(alpha.value() * rat(-20, 1))) + r)) / rat(2, 1);
        let u = uniformity_product(&samples(&alpha, &theta, &js), 4000)?;
        println!("γ = {gamma}: ε = {:.4} (certified ≤ {:.4})", u.epsilon, u.upper);
    }
    Ok(())
}
