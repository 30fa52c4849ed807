use serde::{Deserialize, Serialize};

use super::OperatorParams;
use crate::error::{invalid, Error, Result};
use crate::logdomain::{LogVec2, SignedLog};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// G_I(x1, y)
    Left,
    /// G_I(y, x2)
    Right,
}

/// Signed entry of G_I = (H_I − E)⁻¹ on I = [x1, x2] by Cramer's rule:
///
/// G(x1, y) = −P_{x2−y}(θ + (y+1)α) / P_k(θ + x1α),
/// G(y, x2) = −P_{y−x1}(θ + x1α) / P_k(θ + x1α),  k = x2 − x1 + 1.
pub fn green_entry<R: Real>(params: &OperatorParams, x1: i64, x2: i64, y: i64, side: Side) -> Result<SignedLog> {
    if !(x1 <= y && y <= x2) {
        return Err(invalid(format!("need x1 ≤ y ≤ x2, got [{x1}, {x2}] and y = {y}")));
    }
    let diag = params.diagonal_table::<R>(x1, x2);
    let bits = params.precision_bits;
    let row = GreenBox::new(&diag, bits);
    let g = match side {
        Side::Left => row.left(y - x1),
        Side::Right => row.right(y - x1),
    };
    g.ok_or(Error::BoxSingular { a: x1, b: x2 })
}

/// Leading and trailing determinants of one box, enough for every boundary
/// entry G(x1, ·) and G(·, x2).
pub(crate) struct GreenBox {
    /// lead[j] = P_j on the first j sites.
    lead: Vec<SignedLog>,
    /// trail[j] = det(E − H) on the last j sites.
    trail: Vec<SignedLog>,
}

impl GreenBox {
    pub(crate) fn new<R: Real>(diag: &[R], bits: usize) -> Self {
        let lead = super::determinant_logs_at(diag, bits);
        let mut v = LogVec2::<R>::from_f64(1.0, 0.0, bits);
        let mut trail = vec![SignedLog::new(1, 0.0)];
        for a in diag.iter().rev() {
            v.step(a);
            trail.push(v.component(0));
        }
        GreenBox { lead, trail }
    }

    fn k(&self) -> usize {
        self.lead.len() - 1
    }

    fn full(&self) -> Option<SignedLog> {
        let p = self.lead[self.k()];
        (!p.is_zero()).then_some(p)
    }

    /// G(x1, x1 + j).
    pub(crate) fn left(&self, j: i64) -> Option<SignedLog> {
        let k = self.k() as i64;
        Some(self.trail[(k - 1 - j) as usize].div(&self.full()?).neg())
    }

    /// G(x1 + j, x2).
    pub(crate) fn right(&self, j: i64) -> Option<SignedLog> {
        Some(self.lead[j as usize].div(&self.full()?).neg())
    }
}
