use serde::{Deserialize, Serialize};

use super::green::GreenBox;
use super::OperatorParams;
use crate::error::{invalid, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    /// First qualifying interval [x1, x2] in sweep order.
    pub witness: Option<(i64, i64)>,
}

/// Is y (τ, k)-regular? Looks for I = [x1, x1 + k − 1] ∋ y with
/// |y − x_i| ≥ ⌈k/40⌉ and |G_I(y, x_i)| < e^{−τ|y − x_i|} at both ends,
/// sweeping x1 left to right.
pub fn regularity_check<R: Real>(params: &OperatorParams, y: i64, tau: f64, k: i64) -> Result<Regularity> {
    if !(tau > 0.0) {
        return Err(invalid("τ must be positive"));
    }
    if k < 40 {
        return Err(invalid(format!("regularity needs k ≥ 40, got {k}")));
    }
    let d = (k + 39) / 40;
    let lo = y - k + 1 + d;
    let hi = y - d;
    let diag = params.diagonal_table::<R>(lo, hi + k - 1);
    let bits = params.precision_bits;
    for x1 in lo..=hi {
        let x2 = x1 + k - 1;
        let off = (x1 - lo) as usize;
        let gb = GreenBox::new(&diag[off..off + k as usize], bits);
        let (Some(gl), Some(gr)) = (gb.left(y - x1), gb.right(y - x1)) else {
            continue;
        };
        if gl.log < -tau * (y - x1) as f64 && gr.log < -tau * (x2 - y) as f64 {
            return Ok(Regularity { regular: true, witness: Some((x1, x2)) });
        }
    }
    Ok(Regularity { regular: false, witness: None })
}
