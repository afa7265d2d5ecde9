//! Flow-invariant coordinates `u1 = x1 - ln|V|`, `u2 = -x2 V + V'` and the
//! guard region of the closed witness.

use crate::error::{Error, Result};
use crate::frame::FramePoint;
use crate::szekeres::{field_jet, ReebProfile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UCoords {
    pub u1: f64,
    pub u2: f64,
}

impl UCoords {
    /// Whether `(u1, u2)` lies in `Π = {u1 > 0, u2 < 0}`.
    pub fn in_pi(&self) -> bool {
        self.u1 > 0.0 && self.u2 < 0.0
    }

    /// The cutoff argument `-2 u1 u2 e^{u1} - 1`.
    pub fn nu_argument(&self) -> f64 {
        -2.0 * self.u1 * self.u2 * self.u1.exp() - 1.0
    }
}

pub fn u_coords(profile: &ReebProfile, p: &FramePoint) -> Result<UCoords> {
    let v = field_jet(profile, p.x0);
    if v.v0 == 0.0 {
        return Err(Error::Domain(format!(
            "V({}) = 0: the point lies on the boundary plane or the field underflows",
            p.x0
        )));
    }
    Ok(UCoords {
        u1: p.x1 - v.v0.abs().ln(),
        u2: -p.x2 * v.v0 + v.v1,
    })
}

/// `a(x1, x2) = max{1, |x1| + (|x2| + |x1 x2| + e^{-x1}) / α}`.
pub fn domain_bound(alpha: f64, x1: f64, x2: f64) -> f64 {
    let inner = x1.abs() + (x2.abs() + (x1 * x2).abs() + (-x1).exp()) / alpha;
    inner.max(1.0)
}

/// `0 < x0 < 1 / a(x1, x2)`.
pub fn in_guard(alpha: f64, p: &FramePoint) -> bool {
    p.x0 > 0.0 && p.x0 < 1.0 / domain_bound(alpha, p.x1, p.x2)
}

/// `ln u1 + ln(-u2) + u1` for the positive field, computed without forming
/// `e^{-1/x0^α}`. The cutoff argument exceeds 1 exactly when this is positive.
/// `None` when the point is not in `x0 > 0` or its u-coordinates leave `Π`.
pub fn nu_log_margin(alpha: f64, p: &FramePoint) -> Option<f64> {
    if !(p.x0 > 0.0) {
        return None;
    }
    let xa = p.x0.powf(alpha);
    let pp = 1.0 + xa * p.x1;
    let qq = alpha - xa * p.x0 * p.x2;
    if !(pp > 0.0 && qq > 0.0) {
        return None;
    }
    Some(p.x1 - (2.0 * alpha + 1.0) * p.x0.ln() + pp.ln() + qq.ln())
}
