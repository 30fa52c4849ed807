use mathieu_lab::arithmetic::exact::rat;
use mathieu_lab::arithmetic::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain Euclid on machine integers.
fn euclid(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while p != 0 {
        out.push(q / p);
        (p, q) = (q % p, p);
    }
    out
}

/// ‖k·p/q‖ as a float, from the integer residue.
fn norm_kpq(k: i64, p: i64, q: i64) -> f64 {
    let r = (k * p).rem_euclid(q);
    r.min(q - r) as f64 / q as f64
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn continued_fraction_examples() {
    let (a, c) = continued_fraction(&rat(3, 7), 50).unwrap();
    assert_eq!(a, big(&[2, 3]));
    assert_eq!(c, vec![(BigInt::from(1), BigInt::from(2)), (BigInt::from(3), BigInt::from(7))]);
    assert_eq!(continued_fraction(&rat(13, 29), 50).unwrap().0, big(&euclid(13, 29)));
    assert_eq!(euclid(13, 29), vec![2, 4, 3]);

    // canonical form: seventeen ones and a final 2, i.e. nineteen ones folded
    let (a, _) = continued_fraction(&rat(4181, 6765), 50).unwrap();
    assert_eq!(a, big(&euclid(4181, 6765)));
    assert_eq!(a.len(), 18);
    assert_eq!(*a.last().unwrap(), BigInt::from(2));
    let mut ones = vec![BigInt::from(1); 19];
    ones[0] = BigInt::from(1);
    assert_eq!(from_coefficients(&ones).unwrap(), rat(4181, 6765));
}

#[test]
fn torus_norm_examples() {
    assert_eq!(torus_norm(&rat(7, 10)), rat(3, 10));
    assert_eq!(torus_norm(&rat(1, 2)), rat(1, 2));
    assert_eq!(torus_norm(&rat(13, 5)), rat(2, 5));
    assert_eq!(torus_norm(&rat(-1, 3)), rat(1, 3));
}

#[test]
fn beta_hat_of_golden_convergent() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    // over the dyadic tail ⌈K/2⌉ ≤ k ≤ K; a full scan is dominated by k = 1
    for k_max in [100u64, 200, 1000] {
        let (est, arg) = resonance_exponent(Mode::Beta, &alpha, None, ScanRange::tail(k_max).unwrap()).unwrap();
        let oracle = ((k_max as i64 + 1) / 2..=k_max as i64)
            .map(|k| (-norm_kpq(k, 4181, 6765).ln() / k as f64, k))
            .fold((f64::NEG_INFINITY, 0), |b, x| if x.0 > b.0 { x } else { b });
        assert!((est - oracle.0).abs() < 1e-12, "K = {k_max}: {est} vs {}", oracle.0);
        assert_eq!(arg.abs(), oracle.1);
        if k_max >= 200 {
            assert!(est <= 0.05, "β̂ = {est} at K = {k_max}");
        }
    }
}

#[test]
fn delta_single_term_scan() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let (est, _) = resonance_exponent(Mode::Delta, &alpha, Some(&rat(1, 4)), ScanRange::full(1).unwrap()).unwrap();
    // ‖1/2 + α‖ with α = 4181/6765
    let oracle = -((2 * 4181 + 6765) as f64 / (2.0 * 6765.0) - 1.0).abs().min(0.5).ln();
    let direct = -(norm_kpq(1, 2 * 4181 + 6765, 2 * 6765)).ln();
    assert!((est - oracle).abs() < 1e-12 && (est - direct).abs() < 1e-12);
}

#[test]
fn constructed_single_resonance() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let ph = construct_phase(&alpha, 0.5, &[20]).unwrap();
    let two_theta = &ph.value * rat(2, 1);
    let s20 = -ln_torus_norm(&(&two_theta + alpha.value() * rat(20, 1))) / 20.0;
    assert!((0.45..=0.55).contains(&s20));
    let (est, arg) = resonance_exponent(Mode::Delta, &alpha, Some(&ph.value), ScanRange::tail(20).unwrap()).unwrap();
    assert!((est - 0.5).abs() <= 0.02 && arg == 20, "{est} at {arg}");

    let seq = find_resonances(&alpha, &ph.value, 0.4, ScanRange::resonances(200).unwrap()).unwrap();
    assert_eq!(seq.positions(), vec![20]);
    assert!((seq.entries[0].strength - s20).abs() < 1e-12);
    assert!(find_resonances(&alpha, &ph.value, 10.0, ScanRange::resonances(50).unwrap()).unwrap().is_empty());
}

#[test]
fn non_resonant_and_invalid_constructions() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let ph = construct_phase(&alpha, 0.5, &[]).unwrap();
    let (est, _) = resonance_exponent(Mode::Delta, &alpha, Some(&ph.value), ScanRange::tail(200).unwrap()).unwrap();
    assert!(est <= 0.05 && ph.delta_hat <= 0.05);
    assert!(construct_phase(&alpha, 0.0, &[20]).is_err());
    assert!(construct_phase(&alpha, 0.5, &[30, 20]).is_err());
}

#[test]
fn two_nested_resonances() {
    // near 61/105 with ‖105α‖ ≈ e^{−7.5} = e^{−δ·15}: hosts 15 and 120 = 15 + 105
    let alpha = Frequency::near_rational(61, 105, (-7.5f64).exp(), 12).unwrap();
    let ph = construct_phase(&alpha, 0.5, &[15, 120]).unwrap();
    let seq = find_resonances(&alpha, &ph.value, 0.3, ScanRange::resonances(240).unwrap()).unwrap();
    assert_eq!(seq.positions(), vec![15, 120]);
    assert!(verify_construction(&ph, &alpha, 0.5, &[15, 120]).unwrap());
}

#[test]
fn x0_and_eta() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    // 2θ ≡ −20α
    let theta = exact::frac(&(alpha.value() * rat(-20, 1))) / rat(2, 1);
    let r = locate_x0_eta(&alpha, &theta, 30).unwrap();
    assert_eq!((r.x0, r.integer_hit, r.eta), (20, true, 0.0));

    let ph = construct_phase(&alpha, 0.5, &[20]).unwrap();
    let r = locate_x0_eta(&alpha, &ph.value, 20).unwrap();
    assert_eq!(r.x0, 20);
    // η is defined through |sin π·|, so it sits ln π / 20 below the norm exponent
    let two_theta = &ph.value * rat(2, 1);
    let d = exact::rational_to_f64(&torus_norm(&(&two_theta + alpha.value() * rat(20, 1))));
    let oracle = -(std::f64::consts::PI * d).sin().ln() / 20.0;
    assert!((r.eta - oracle).abs() < 1e-10, "{} vs {oracle}", r.eta);
    assert!((r.eta - (0.5 - std::f64::consts::PI.ln() / 20.0)).abs() < 0.01);

    let nr = construct_phase(&alpha, 0.5, &[]).unwrap();
    let r = locate_x0_eta(&alpha, &nr.value, 100).unwrap();
    let tf = exact::rational_to_f64(&(&nr.value * rat(2, 1)));
    let af = alpha.to_f64();
    let (x_or, s_or) = (-200i64..=200)
        .map(|x| (x, (std::f64::consts::PI * (tf + x as f64 * af)).sin().abs()))
        .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
    assert_eq!(r.x0, x_or);
    assert!((r.eta + s_or.ln() / 100.0).abs() < 1e-9);
    assert!(r.eta <= 0.1);
}

/// Direct summation in f64 from exactly reduced residues.
fn ln_sin_oracle(xn: i64, xd: i64, p: i64, q_alpha: i64, qn: i64) -> f64 {
    // x + kα = (xn·q_alpha + k·p·xd) / (xd·q_alpha)
    let den = xd as i128 * q_alpha as i128;
    let terms: Vec<f64> = (0..qn)
        .map(|k| {
            let num = (xn as i128 * q_alpha as i128 + k as i128 * p as i128 * xd as i128).rem_euclid(den);
            (std::f64::consts::PI * num as f64 / den as f64).sin().abs().ln()
        })
        .collect();
    let k0 = (0..qn as usize).min_by(|&a, &b| terms[a].total_cmp(&terms[b])).unwrap();
    terms.iter().enumerate().filter(|(k, _)| *k != k0).map(|(_, t)| t).sum::<f64>() + (qn - 1) as f64 * std::f64::consts::LN_2
}

#[test]
fn ln_sin_sums_match_direct_summation() {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for qn in [233i64, 1597] {
        for _ in 0..100 {
            let xd = 1_000_003i64;
            let xn = rng.gen_range(1..xd);
            let (s, _) = ln_sin_sum(&rat(xn, xd), &alpha, qn as u64).unwrap();
            let o = ln_sin_oracle(xn, xd, 4181, 6765, qn);
            assert!((s - o).abs() < 1e-8 * (1.0 + o.abs()), "q = {qn}: {s} vs {o}");
            assert!(s.abs() <= 10.0 * (qn as f64).ln());
        }
    }
    let (s, _) = ln_sin_sum(&rat(123_456, 1_000_000), &alpha, 1597).unwrap();
    assert!(s.abs() <= 10.0 * 1597f64.ln());
    assert!(ln_sin_sum(&rat(1, 3), &alpha, 100).is_err());
}

#[test]
fn ln_sin_two_term_case() {
    // q = 2 is a convergent denominator of 4181/6765 ([0; 1, 1, …] → 1/1, 1/2, …)
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let x = 1.0 / 3.0;
    let a = alpha.to_f64();
    let t = [(std::f64::consts::PI * x).sin().abs(), (std::f64::consts::PI * (x + a)).sin().abs()];
    let other = if t[0] < t[1] { t[1] } else { t[0] };
    let (s, _) = ln_sin_sum(&rat(1, 3), &alpha, 2).unwrap();
    assert!((s - (other.ln() + std::f64::consts::LN_2)).abs() < 1e-12);
}

#[test]
fn golden_convergents_are_fibonacci() {
    let alpha = Frequency::golden_with_denominator(6765).unwrap();
    assert_eq!(alpha.value(), &rat(4181, 6765));
    let qs: Vec<BigInt> = alpha.denominators().cloned().collect();
    let mut fib = vec![BigInt::from(1), BigInt::from(2)];
    while fib.len() < qs.len() + 1 {
        let n = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(n);
    }
    // the closing quotient 2 skips one Fibonacci number
    let n = qs.len();
    assert_eq!(qs[..n - 1], fib[..n - 1]);
    assert_eq!(qs[n - 1], fib[n]);
    let _: &BigRational = alpha.value();
}
