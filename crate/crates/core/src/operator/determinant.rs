use super::OperatorParams;
use crate::logdomain::{LogVec2, SignedLog};
use crate::real::Real;

/// P_j = det(E − H) restricted to [shift, shift + j − 1] for 0 ≤ j ≤ k_max,
/// by P_j = (E − V(shift + j − 1))P_{j−1} − P_{j−2}, P_0 = 1, P_{−1} = 0.
/// An exactly vanishing P_j is reported as sign 0, log −∞.
pub fn determinant_logs<R: Real>(params: &OperatorParams, k_max: usize, shift: i64) -> Vec<SignedLog> {
    if k_max == 0 {
        return vec![SignedLog::new(1, 0.0)];
    }
    let diag = params.diagonal_table::<R>(shift, shift + k_max as i64 - 1);
    determinant_logs_at(&diag, params.precision_bits)
}

/// Same recursion over explicit diagonal entries a_j = E − V_j.
pub fn determinant_logs_at<R: Real>(diag: &[R], bits: usize) -> Vec<SignedLog> {
    let mut v = LogVec2::<R>::from_f64(1.0, 0.0, bits);
    let mut out = Vec::with_capacity(diag.len() + 1);
    out.push(SignedLog::new(1, 0.0));
    for a in diag {
        v.step(a);
        out.push(v.component(0));
    }
    out
}
