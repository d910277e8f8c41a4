//! Lifting circles to `(x, y, slope)` space and the order reversal check.

use crate::error::{Error, Result};
use crate::exact::{point_on_circle, Circle, QuadNum, QuadPoint};
use crate::pencil::Lens;
use crate::scene::Scene;

/// A point of a circle together with the circle's slope there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPoint {
    pub x: QuadNum,
    pub y: QuadNum,
    pub z: QuadNum,
}

impl GammaPoint {
    /// Residuals of `g(x, y) = 0` and `z·∂g/∂y + ∂g/∂x = 0` for
    /// `g = (x − cx)² + (y − cy)² − r2`; both are zero for points built by
    /// [`gamma_point`].
    pub fn residuals(&self, c: &Circle) -> (QuadNum, QuadNum) {
        let dx = &self.x - &QuadNum::from(c.cx().clone());
        let dy = &self.y - &QuadNum::from(c.cy().clone());
        let g = &(&(&dx * &dx) + &(&dy * &dy)) - &QuadNum::from(c.r2().clone());
        let two = QuadNum::int(2);
        let slope_eq = &(&self.z * &(&two * &dy)) + &(&two * &dx);
        (g, slope_eq)
    }
}

pub fn gamma_point(c: &Circle, p: &QuadPoint) -> Result<GammaPoint> {
    if !point_on_circle(p, c) {
        return Err(Error::InvalidInput(format!(
            "point {p} is not on the circle"
        )));
    }
    let dx = &p.x - &QuadNum::from(c.cx().clone());
    let dy = &p.y - &QuadNum::from(c.cy().clone());
    let z = (-&dx).div(&dy).ok_or(Error::VerticalTangent)?;
    Ok(GammaPoint {
        x: p.x.clone(),
        y: p.y.clone(),
        z,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReversal {
    /// Circle ids sorted by slope at `p`, then at `q`.
    pub order_p: Vec<usize>,
    pub order_q: Vec<usize>,
    /// Circles dropped for a vertical tangent at either base point.
    pub excluded: Vec<usize>,
    /// The order at `q` is exactly the reverse of the order at `p`.
    pub reversed: bool,
    /// The order at `q` is the reverse of a cyclic rotation of the order at
    /// `p`.
    pub cyclically_reversed: bool,
    /// Slope at `p` of the pencil member that is vertical at `q`, if any.
    pub pole: Option<QuadNum>,
    /// Some slope at `p` lies on each side of `pole`.
    pub straddles_pole: bool,
}

/// Slope at `p` of the circle through `p` and `q` whose tangent at `q` is
/// vertical. Slopes at `q` are a decreasing function of slopes at `p` on
/// either side of this value. `None` when `pq` is axis-parallel, where the
/// map is `z ↦ −z`.
pub fn pole_slope(p: &QuadPoint, q: &QuadPoint) -> Option<QuadNum> {
    let dx = &q.x - &p.x;
    let dy = &q.y - &p.y;
    if dx.is_zero() || dy.is_zero() {
        return None;
    }
    let half = QuadNum::from(crate::exact::ratio(1, 2));
    let mx = &half * &(&p.x + &q.x);
    let my = &half * &(&p.y + &q.y);
    // center on the bisector at height q_y
    let cx = &mx - &(&dy * &(&q.y - &my)).div(&dx).expect("dx nonzero");
    let cy = q.y.clone();
    (-&(&p.x - &cx)).div(&(&p.y - &cy))
}

pub fn order_reversal_check(scene: &Scene, lens: &Lens) -> Result<OrderReversal> {
    let mut excluded = Vec::new();
    let mut slopes = Vec::new();
    for &id in lens.circles() {
        let c = scene.circle(id);
        match (gamma_point(c, lens.p()), gamma_point(c, lens.q())) {
            (Ok(gp), Ok(gq)) => slopes.push((id, gp.z, gq.z)),
            (Err(Error::VerticalTangent), _) | (_, Err(Error::VerticalTangent)) => {
                excluded.push(id)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if slopes.len() < 2 {
        return Err(Error::Inconclusive(format!(
            "{} comparable circles in lens",
            slopes.len()
        )));
    }
    let mut at_p = slopes.clone();
    at_p.sort_by(|a, b| a.1.cmp(&b.1));
    let mut at_q = slopes;
    at_q.sort_by(|a, b| a.2.cmp(&b.2));
    let order_p: Vec<usize> = at_p.iter().map(|s| s.0).collect();
    let order_q: Vec<usize> = at_q.iter().map(|s| s.0).collect();
    let rev: Vec<usize> = order_p.iter().rev().copied().collect();
    let reversed = rev == order_q;
    let cyclically_reversed = (0..rev.len()).any(|r| {
        rev.iter()
            .cycle()
            .skip(r)
            .take(rev.len())
            .eq(order_q.iter())
    });
    let pole = pole_slope(lens.p(), lens.q());
    let straddles_pole = pole
        .as_ref()
        .is_some_and(|z| at_p.iter().any(|s| s.1 < *z) && at_p.iter().any(|s| s.1 > *z));
    Ok(OrderReversal {
        order_p,
        order_q,
        excluded,
        reversed,
        cyclically_reversed,
        pole,
        straddles_pole,
    })
}
