use mathieu_lab::arithmetic::exact::{frac, rat};
use mathieu_lab::arithmetic::{construct_phase, Frequency, Phase, ResonanceSequence};
use mathieu_lab::eigensolve::{box_eigenvalues_f64, eigenvector_profile, BoxSpec, SolutionProfile};
use mathieu_lab::logdomain::SignedLog;
use mathieu_lab::operator::{potential_value, OperatorParams};
use mathieu_lab::sctest::*;
use mathieu_lab::{Error, XReal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn from_f64(lo: i64, v: &[f64]) -> SolutionProfile {
    let phi: Vec<SignedLog> = v.iter().map(|&x| SignedLog::from_f64(x)).collect();
    SolutionProfile::from_phi(lo, &phi, XReal::from_f64(0.3, 256))
}

/// 2θ + kα ≡ 0, so V(n) = V(k − n).
fn palindromic(k: i64, ln_lambda: f64) -> OperatorParams {
    let alpha = Frequency::from_ratio(4181, 6765).unwrap();
    let theta = frac(&(alpha.value() * rat(-k, 1))) / rat(2, 1);
    let ph = Phase::explicit(&alpha, &theta).unwrap();
    OperatorParams::new(ln_lambda, alpha, ph).unwrap()
}

#[test]
fn self_wronskian_vanishes() {
    let v: Vec<f64> = (0..50).map(|n| ((n as f64) * 0.7).sin() + 0.1).collect();
    let u = from_f64(0, &v);
    let w = wronskian_profile(&u, &u).unwrap();
    assert!(w.values.iter().all(|x| x.to_f64() == 0.0));
}

#[test]
fn wronskian_of_two_solutions_is_constant() {
    let p = palindromic(20, 0.2);
    let e = 0.3;
    let solve = |a: f64, b: f64| {
        let mut u = vec![a, b];
        for n in 0..30i64 {
            let m = u.len();
            u.push((e - potential_value(&p, n)) * u[m - 1] - u[m - 2]);
        }
        u
    };
    // u[0] is site −1
    let (u, v) = (from_f64(0, &solve(1.0, 0.0)), from_f64(0, &solve(0.0, 1.0)));
    let w = wronskian_profile(&u, &v).unwrap();
    let w0 = w.values[0].to_f64();
    for x in &w.values {
        assert!((x.to_f64() - w0).abs() <= 1e-6 * w0.abs(), "{} vs {w0}", x.to_f64());
    }
}

#[test]
fn reflection_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v: Vec<f64> = (0..41).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let u = from_f64(-10, &v);
    for k in [0, 7, 20, -13] {
        let r = reflect(&reflect(&u, k), k);
        assert_eq!((r.lo, r.hi), (u.lo, u.hi));
        for n in u.lo..=u.hi {
            assert_eq!(r.phi(n), u.phi(n));
        }
    }
}

#[test]
fn exact_palindrome_has_vanishing_wronskian() {
    let k = 20;
    let p = palindromic(k, 0.5);
    let bx = BoxSpec::new(k / 2 - 60, k / 2 + 60).unwrap();
    let ev = box_eigenvalues_f64(&p, bx, (f64::NEG_INFINITY, f64::INFINITY)).unwrap();
    let mut symmetric = 0;
    for &e in ev.iter().step_by(10) {
        let u = eigenvector_profile(&p, bx, &XReal::from_f64(e, 256)).unwrap();
        let v = palindrome_test(&p, &u, k, 0.5, 0.1).unwrap();
        assert!(v.wronskian_sup <= 1e-10, "E = {e}: {}", v.wronskian_sup);
        let m = k / 2;
        let even = u.phi(m + 1).sign == u.phi(m - 1).sign;
        if even {
            symmetric += 1;
            assert_eq!(v.midpoint.branch, Branch::Difference);
        }
        assert_eq!(v.midpoint.parity, Parity::Even);
    }
    assert!(symmetric > 0);

    // a random vector on the same window is nowhere near palindromic
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r: Vec<f64> = (bx.a - 1..=bx.b).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let v = palindrome_test(&p, &from_f64(bx.a, &r), k, 0.5, 0.1).unwrap();
    assert!(v.wronskian_sup > v.scale * 10.0, "{v:?}");
}

#[test]
fn localized_parameters_are_rejected() {
    let alpha = Frequency::golden_with_denominator(6765).unwrap();
    let ph = construct_phase(&alpha, 0.5, &[20]).unwrap();
    let seq: ResonanceSequence = ph.resonances.clone();
    let p = OperatorParams::new(1.0, alpha, ph).unwrap();
    assert!(matches!(sc_transport_check(&p, &seq, 0.5, ScOptions::default()), Err(Error::InvalidRegime { .. })));
}
