use mathieu_lab::arithmetic::exact::rat;
use mathieu_lab::arithmetic::{Frequency, Phase};
use mathieu_lab::eigensolve::*;
use mathieu_lab::logdomain::LogVec2;
use mathieu_lab::operator::{OperatorParams, PotentialKind};
use mathieu_lab::XReal;
use nalgebra::{DMatrix, SymmetricEigen};

fn params(alpha: Frequency, theta: (i64, i64), ln_lambda: f64) -> OperatorParams {
    let ph = Phase::explicit(&alpha, &rat(theta.0, theta.1)).unwrap();
    OperatorParams::new(ln_lambda, alpha, ph).unwrap()
}

fn dense(p: &OperatorParams, bx: BoxSpec) -> DMatrix<f64> {
    let v = p.potential_table::<f64>(bx.a, bx.b);
    let n = bx.size();
    DMatrix::from_fn(n, n, |i, j| if i == j { v[i] } else if i.abs_diff(j) == 1 { 1.0 } else { 0.0 })
}

#[test]
fn free_laplacian_closed_form() {
    let p = params(Frequency::golden(15).unwrap(), (1, 5), 0.0).with_potential(PotentialKind::Zero);
    let bx = BoxSpec::new(0, 9).unwrap();
    let es = box_eigenvalues(&p, bx, (-3.0, 3.0), 1e-30).unwrap();
    assert_eq!(es.len(), 10);
    for (j, e) in es.iter().enumerate() {
        let want = -2.0 * (std::f64::consts::PI * (j + 1) as f64 / 11.0).cos();
        assert!((e.to_f64() - want).abs() < 1e-14, "{j}");
    }
}

#[test]
fn three_site_box_matches_dense() {
    let p = params(Frequency::golden(18).unwrap(), (2, 7), 0.4);
    let bx = BoxSpec::new(5, 7).unwrap();
    let es = box_eigenvalues(&p, bx, (-10.0, 10.0), 1e-40).unwrap();
    let mut dense_es: Vec<f64> = SymmetricEigen::new(dense(&p, bx)).eigenvalues.iter().copied().collect();
    dense_es.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(es.len(), 3);
    for (e, d) in es.iter().zip(&dense_es) {
        assert!((e.to_f64() - d).abs() < 1e-10);
    }
}

#[test]
fn sturm_counts_and_windows() {
    let p = params(Frequency::golden(18).unwrap(), (1, 3), 0.8);
    let bx = BoxSpec::new(-20, 20).unwrap();
    let v = p.potential_table::<f64>(bx.a, bx.b);
    let mut last = 0;
    for i in -100..=100 {
        let c = sturm_count(&v, &(i as f64 * 0.1));
        assert!(c >= last);
        last = c;
    }
    assert_eq!(sturm_count(&v, &100.0), bx.size());
    let es = box_eigenvalues(&p, bx, (-1.0, 2.0), 1e-30).unwrap();
    assert_eq!(es.len(), sturm_count(&v, &2.0) - sturm_count(&v, &-1.0));
    assert!(box_eigenvalues(&p, bx, (1.0, 1.0), 1e-30).is_err());
}

#[test]
fn nine_site_eigenvectors_match_dense() {
    let p = params(Frequency::golden(18).unwrap(), (3, 10), 0.6);
    let bx = BoxSpec::new(0, 8).unwrap();
    let eig = SymmetricEigen::new(dense(&p, bx));
    let es = box_eigenvalues(&p, bx, (-20.0, 20.0), 1e-60).unwrap();
    for e in &es {
        let prof = eigenvector_profile(&p, bx, e).unwrap();
        assert!(prof.residual <= 1e-6);
        let idx = (0..9)
            .min_by(|&i, &j| {
                (eig.eigenvalues[i] - e.to_f64()).abs().partial_cmp(&(eig.eigenvalues[j] - e.to_f64()).abs()).unwrap()
            })
            .unwrap();
        let d = eig.eigenvectors.column(idx);
        let ours: Vec<f64> = (0..=8).map(|n| prof.phi(n).to_f64()).collect();
        let dot: f64 = ours.iter().zip(d.iter()).map(|(a, b)| a * b).sum();
        let na: f64 = ours.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(dot.abs() / na >= 1.0 - 1e-8);
    }
}

#[test]
fn palindromic_potential_gives_symmetric_vectors() {
    // V(n) = V(−n) when 2θ ∈ ℤ
    let p = params(Frequency::from_ratio(2, 7).unwrap(), (0, 1), 0.5);
    let bx = BoxSpec::new(-6, 6).unwrap();
    for e in box_eigenvalues(&p, bx, (-10.0, 10.0), 1e-50).unwrap() {
        let prof = eigenvector_profile(&p, bx, &e).unwrap();
        for j in 1..=6 {
            let (l, r) = (prof.phi(-j), prof.phi(j));
            if l.log > -30.0 {
                assert!((l.log - r.log).abs() <= 1e-6, "{j}");
            }
        }
    }
}

#[test]
fn propagation_round_trip_and_norm_bound() {
    let p = params(Frequency::golden(20).unwrap(), (1, 7), 1.0).with_energy_f64(0.37);
    let u0 = LogVec2::<XReal>::from_f64(0.6, -0.8, 256);
    let prof = solution_profile(&p, &u0, 300);
    let norms = mathieu_lab::operator::transfer_norm_logs::<XReal>(&p, 300);
    for ell in -300..=300 {
        assert!(prof.log_u_at(ell) <= norms.get(ell) + 1e-9);
    }
    // forward then backward returns the initial direction; the round trip
    // amplifies rounding by e^{2N ln λ}, so it needs ≈ 2N·ln λ/ln 2 extra bits
    let p = p.with_precision(1024);
    let u0 = LogVec2::<XReal>::from_f64(0.6, -0.8, 1024);
    let mut u = u0.clone();
    let diag = p.diagonal_table::<XReal>(0, 299);
    for a in &diag {
        u.step(a);
    }
    for a in diag.iter().rev() {
        u.step_back(a);
    }
    assert!(u.sin_angle(&u0) < 1e-8);
}
