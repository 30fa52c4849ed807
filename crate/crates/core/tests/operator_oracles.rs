use mathieu_lab::arithmetic::exact::rat;
use mathieu_lab::arithmetic::{Frequency, Phase};
use mathieu_lab::logdomain::LogMat2;
use mathieu_lab::operator::*;
use mathieu_lab::XReal;
use nalgebra::{DMatrix, DVector};

fn params(theta: (i64, i64), ln_lambda: f64, e: f64) -> OperatorParams {
    let alpha = Frequency::golden(20).unwrap();
    let ph = Phase::explicit(&alpha, &rat(theta.0, theta.1)).unwrap();
    OperatorParams::new(ln_lambda, alpha, ph).unwrap().with_energy_f64(e)
}

fn dense_box(p: &OperatorParams, a: i64, b: i64) -> DMatrix<f64> {
    let n = (b - a + 1) as usize;
    let v = p.potential_table::<f64>(a, b);
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            v[i]
        } else if i.abs_diff(j) == 1 {
            1.0
        } else {
            0.0
        }
    })
}

#[test]
fn one_step_matrix_has_paper_entries() {
    let p = params((0, 1), 1.0, 0.3);
    let m: LogMat2<f64> = transfer_product(&p, 1, 0);
    let s = m.log_scale().exp();
    let b = m.block_f64();
    let lam = std::f64::consts::E;
    assert!((b[0][0] * s - (0.3 - 2.0 * lam)).abs() < 1e-12);
    assert!((b[0][1] * s + 1.0).abs() < 1e-14);
    assert!((b[1][0] * s - 1.0).abs() < 1e-14);
    assert_eq!(b[1][1], 0.0);
    let id: LogMat2<f64> = transfer_product(&p, 0, 7);
    assert_eq!(id.exp2, 0);
    assert_eq!(id.block_f64(), [[1.0, 0.0], [0.0, 1.0]]);
}

#[test]
fn negative_index_inverts() {
    let p = params((1, 7), 1.0, 0.4);
    let inv: LogMat2<XReal> = transfer_product(&p, -5, 0);
    let fwd: LogMat2<XReal> = transfer_product(&p, 5, -5);
    let prod = inv.mul(&fwd);
    let s = prod.log_scale().exp();
    let b = prod.block_f64();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((b[i][j] * s - want).abs() < 1e-8, "{b:?} {s}");
        }
    }
}

#[test]
fn determinants_match_dense_and_transfer_columns() {
    let p = params((1, 9), 0.7, -0.8);
    let dets = determinant_logs::<f64>(&p, 10, 3);
    let e = -0.8;
    for k in 1..=10usize {
        let h = dense_box(&p, 3, 3 + k as i64 - 1);
        let m = DMatrix::<f64>::identity(k, k) * e - h;
        let d = m.determinant();
        assert!((dets[k].to_f64() - d).abs() <= 1e-9 * d.abs().max(1.0), "k={k}");
    }
    // first column of A_k(θ + 3α) is (P_k, P_{k−1}); second is −(P_{k−1}, P_{k−2}) shifted by one
    let shifted = determinant_logs::<f64>(&p, 10, 4);
    for k in 2..=10i64 {
        let a: LogMat2<XReal> = transfer_product(&p, k, 3);
        let ku = k as usize;
        for (entry, want) in [
            (a.entry(0, 0), dets[ku]),
            (a.entry(1, 0), dets[ku - 1]),
            (a.entry(0, 1), shifted[ku - 1].neg()),
            (a.entry(1, 1), shifted[ku - 2].neg()),
        ] {
            assert_eq!(entry.sign, want.sign);
            assert!((entry.log - want.log).abs() < 1e-8);
        }
    }
}

#[test]
fn green_entries_match_dense_inverse() {
    for (theta, e) in [((1, 9), -0.8), ((2, 5), 1.3), ((3, 11), 0.05)] {
        let p = params(theta, 0.9, e);
        for size in 1..=12i64 {
            let (x1, x2) = (-2, -2 + size - 1);
            let h = dense_box(&p, x1, x2);
            let n = size as usize;
            let g = (h - DMatrix::<f64>::identity(n, n) * e).try_inverse().unwrap();
            for y in x1..=x2 {
                let l = green_entry::<f64>(&p, x1, x2, y, Side::Left).unwrap();
                let r = green_entry::<f64>(&p, x1, x2, y, Side::Right).unwrap();
                let dl = g[(0, (y - x1) as usize)];
                let dr = g[((y - x1) as usize, n - 1)];
                assert!((l.to_f64() - dl).abs() <= 1e-8 * dl.abs(), "{size} {y}");
                assert!((r.to_f64() - dr).abs() <= 1e-8 * dr.abs(), "{size} {y}");
            }
        }
        // single site
        let one = green_entry::<f64>(&p, 4, 4, 4, Side::Left).unwrap();
        assert!((one.to_f64() - 1.0 / (potential_value(&p, 4) - e)).abs() < 1e-12);
        // solve-based check on a 5-site box
        let h = dense_box(&p, 0, 4);
        let m = h - DMatrix::<f64>::identity(5, 5) * e;
        let mut rhs = DVector::<f64>::zeros(5);
        rhs[0] = 1.0;
        let col = m.lu().solve(&rhs).unwrap();
        for y in 0..5 {
            let l = green_entry::<f64>(&p, 0, 4, y, Side::Left).unwrap().to_f64();
            assert!((l - col[y as usize]).abs() <= 1e-8 * col[y as usize].abs());
        }
    }
}

#[test]
fn green_rejects_bad_interval() {
    let p = params((1, 9), 0.9, 0.0);
    assert!(green_entry::<f64>(&p, 0, 4, 7, Side::Left).is_err());
}
