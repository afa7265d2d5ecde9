//! Szekeres vector fields of the Reeb families and their flows.
//!
//! The positive branch is `V(x) = -exp(-1/x^α)` for `x > 0` and `0` for
//! `x <= 0`. The negative branch (holonomy `ψ`) is its mirror image
//! `Ṽ(x) = -V(-x)`, and the two-sided field is the even extension
//! `V(x) = -exp(-1/|x|^α)`. Everything on the negative half-line is computed by
//! reflecting the positive-branch machinery.
//!
//! The flow is `φ_t(x) = f̂⁻¹(f̂(x) + t)` with `f̂(x) = ∫_1^x dξ / V(ξ)`. Rather than
//! subtracting two large values of `f̂`, [`flow`] solves `∫_x^y dξ / V(ξ) = t` for
//! `y` directly with a bracketed search and a Newton polish.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::error::{Error, Result};
use crate::frame::MapJet;
use crate::jets::JetScalar;
use crate::quadrature::{integrate, Tolerance};

/// Beyond this value of `x^{-α}` the field underflows to zero in `f64`.
const UNDERFLOW_EXPONENT: f64 = 745.0;
/// Beyond this value of `x^{-α}` the integrand `1/V` overflows.
const OVERFLOW_EXPONENT: f64 = 709.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `-exp(-1/x^α)` on `x > 0`.
    Positive,
    /// `exp(-1/|x|^α)` on `x < 0`.
    Negative,
    /// `-exp(-1/|x|^α)` on `x ≠ 0`.
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReebProfile {
    alpha: f64,
    side: Side,
}

impl ReebProfile {
    pub fn new(alpha: f64, side: Side) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be a positive finite real, got {alpha}"
            )));
        }
        Ok(Self { alpha, side })
    }

    pub fn positive(alpha: f64) -> Result<Self> {
        Self::new(alpha, Side::Positive)
    }

    pub fn negative(alpha: f64) -> Result<Self> {
        Self::new(alpha, Side::Negative)
    }

    pub fn two_sided(alpha: f64) -> Result<Self> {
        Self::new(alpha, Side::TwoSided)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Whether `x` lies where the field is (mathematically) nonzero.
    pub fn is_active(&self, x: f64) -> bool {
        match self.side {
            Side::Positive => x > 0.0,
            Side::Negative => x < 0.0,
            Side::TwoSided => x != 0.0,
        }
    }
}

/// `V, V', V'', V'''` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet {
    pub x: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl FieldJet {
    pub const fn new(x: f64, v: [f64; 4]) -> Self {
        Self {
            x,
            v0: v[0],
            v1: v[1],
            v2: v[2],
            v3: v[3],
        }
    }

    pub const fn zero(x: f64) -> Self {
        Self::new(x, [0.0; 4])
    }

    pub fn derivatives(&self) -> [f64; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }
}

/// Anything that yields third-order jets of a vector field on the line.
pub trait SzekeresField {
    fn jet_at(&self, x: f64) -> FieldJet;
}

impl SzekeresField for ReebProfile {
    fn jet_at(&self, x: f64) -> FieldJet {
        field_jet(self, x)
    }
}

impl<F: Fn(f64) -> FieldJet> SzekeresField for F {
    fn jet_at(&self, x: f64) -> FieldJet {
        self(x)
    }
}

/// Derivatives of `-exp(-x^{-α})` at `x > 0`.
fn positive_branch(alpha: f64, x: f64) -> [f64; 4] {
    if !(x.powf(-alpha) < UNDERFLOW_EXPONENT) {
        return [0.0; 4];
    }
    let jet = JetScalar::variable(x, 3)
        .and_then(|x| x.powf(-alpha))
        .and_then(|s| (-s).exp())
        .map(|e| -e);
    match jet {
        Ok(j) => [j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3)],
        // only reachable through intermediate overflow, where V is already flat
        Err(_) => [0.0; 4],
    }
}

pub fn field_jet(profile: &ReebProfile, x: f64) -> FieldJet {
    let a = profile.alpha;
    let v = match profile.side {
        Side::Positive if x > 0.0 => positive_branch(a, x),
        // Ṽ(x) = -V(-x): Ṽ^(k)(x) = -(-1)^k V^(k)(-x)
        Side::Negative if x < 0.0 => {
            let p = positive_branch(a, -x);
            [-p[0], p[1], -p[2], p[3]]
        }
        Side::TwoSided if x > 0.0 => positive_branch(a, x),
        // even extension: V^(k)(x) = (-1)^k V^(k)(-x)
        Side::TwoSided if x < 0.0 => {
            let p = positive_branch(a, -x);
            [p[0], -p[1], p[2], -p[3]]
        }
        _ => [0.0; 4],
    };
    FieldJet::new(x, v)
}

/// `1/V` on the positive branch: `-exp(ξ^{-α})`.
fn reciprocal_field(alpha: f64, xi: f64) -> f64 {
    -(xi.powf(-alpha)).exp()
}

fn positive_hat_f(alpha: f64, x: f64) -> Result<f64> {
    Ok(integrate(|s| reciprocal_field(alpha, s), 1.0, x, Tolerance::default())?.value)
}

/// `f̂(x) = ∫_1^x dξ / V(ξ)` (mirrored to base point `-1` on the negative half-line).
pub fn hat_f(profile: &ReebProfile, x: f64) -> Result<f64> {
    if !profile.is_active(x) {
        return Err(Error::Domain(format!(
            "f̂ is defined only on the active branch of the field, got x = {x}"
        )));
    }
    let a = profile.alpha;
    match profile.side {
        Side::Negative => positive_hat_f(a, -x),
        Side::TwoSided if x < 0.0 => Ok(-positive_hat_f(a, -x)?),
        _ => positive_hat_f(a, x),
    }
}

/// Bounds on `|x|` for the active branch during flow bracketing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowDomain {
    pub lo: f64,
    pub hi: f64,
}

impl Default for FlowDomain {
    fn default() -> Self {
        Self { lo: 0.0, hi: 1000.0 }
    }
}

/// Flow of the positive branch for `x > 0`.
fn positive_flow(alpha: f64, t: f64, x: f64, domain: FlowDomain) -> Result<f64> {
    let v = positive_branch(alpha, x)[0];
    if t == 0.0 || (t * v).abs() <= 1e-17 * x {
        // motion below one ulp of x
        return Ok(x);
    }
    let range_error = |bl: f64, bh: f64| Error::Range {
        t,
        x,
        lo: domain.lo,
        hi: domain.hi,
        bracket_lo: bl,
        bracket_hi: bh,
    };
    if x <= domain.lo || x > domain.hi {
        return Err(range_error(x, x));
    }
    // G(y) = ∫_x^y dξ/V(ξ): strictly decreasing, G(x) = 0.
    let g = |y: f64| -> Result<f64> {
        if y < x && !(y.powf(-alpha) < OVERFLOW_EXPONENT) {
            return Ok(f64::INFINITY);
        }
        Ok(integrate(|s| reciprocal_field(alpha, s), x, y, Tolerance::default())?.value)
    };
    let (mut lo, mut hi);
    if t > 0.0 {
        // the integrand exceeds 1/|V(x)| on (y, x), so x - y <= t |V(x)|
        hi = x;
        lo = x - t * v.abs();
        if lo <= 0.0 {
            lo = 0.5 * x;
        }
        while g(lo)? < t {
            hi = lo;
            lo *= 0.5;
            if lo <= domain.lo || lo < f64::MIN_POSITIVE {
                return Err(range_error(lo, x));
            }
        }
    } else {
        // the integrand is at least 1 in magnitude, so y - x <= |t|
        lo = x;
        hi = (x - t).min(domain.hi);
        if g(hi)? > t {
            return Err(range_error(x, x - t));
        }
    }
    // G(lo) >= t >= G(hi)
    for _ in 0..400 {
        let width = hi - lo;
        if width <= 1e-13_f64.min(1e-13 * hi).max(4.0 * f64::EPSILON * hi) {
            break;
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? >= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut y = lo + 0.5 * (hi - lo);
    // Newton polish with G'(y) = 1/V(y)
    let vy = positive_branch(alpha, y)[0];
    if vy != 0.0 {
        let step = (g(y)? - t) * vy;
        let polished = y - step;
        if polished >= lo && polished <= hi {
            y = polished;
        }
    }
    Ok(y)
}

pub fn flow_in(profile: &ReebProfile, t: f64, x: f64, domain: FlowDomain) -> Result<f64> {
    if !t.is_finite() || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "flow needs finite t and x, got t = {t}, x = {x}"
        )));
    }
    let a = profile.alpha;
    match profile.side {
        Side::Positive if x > 0.0 => positive_flow(a, t, x, domain),
        Side::Negative if x < 0.0 => Ok(-positive_flow(a, t, -x, domain)?),
        Side::TwoSided if x > 0.0 => positive_flow(a, t, x, domain),
        // the even field reverses time under reflection
        Side::TwoSided if x < 0.0 => Ok(-positive_flow(a, -t, -x, domain)?),
        _ => Ok(x),
    }
}

/// `φ_t(x)`: the time-`t` flow of the profile's field.
pub fn flow(profile: &ReebProfile, t: f64, x: f64) -> Result<f64> {
    flow_in(profile, t, x, FlowDomain::default())
}

/// The holonomy generator, `φ_1`.
pub fn holonomy(profile: &ReebProfile, x: f64) -> Result<f64> {
    flow(profile, 1.0, x)
}

/// Classical RK4 integration of `ẋ = V(x)` with fixed step `<= 1e-3` and one
/// Richardson halving. Independent of [`flow`]; used as a cross-check.
pub fn flow_ode_oracle(profile: &ReebProfile, t: f64, x: f64) -> Result<f64> {
    if !(t.abs() <= 10.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "oracle needs |t| <= 10 and finite x, got t = {t}, x = {x}"
        )));
    }
    if t == 0.0 || !profile.is_active(x) {
        return Ok(x);
    }
    if field_jet(profile, x).v0 == 0.0 {
        return Err(Error::OracleUnderflow(x));
    }
    let n = (t.abs() / 1e-3).ceil().max(1.0) as usize;
    let coarse = rk4(profile, t, x, n);
    let fine = rk4(profile, t, x, 2 * n);
    Ok((16.0 * fine - coarse) / 15.0)
}

fn rk4(profile: &ReebProfile, t: f64, x: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let f = |y: f64| field_jet(profile, y).v0;
    let mut y = x;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

/// Third-order jet of `φ_t` at `x`.
///
/// From `f̂(φ_t(x)) = f̂(x) + t` one gets `φ_t' = V(φ_t(x)) / V(x)`; the higher
/// derivatives follow by differentiating that quotient with jets.
pub fn flow_jet(profile: &ReebProfile, t: f64, x: f64) -> Result<MapJet> {
    let vx = field_jet(profile, x);
    if vx.v0 == 0.0 {
        return Ok(MapJet::identity(x));
    }
    let y0 = flow(profile, t, x)?;
    let vy = field_jet(profile, y0).derivatives();
    let vxd = vx.derivatives();
    let mut y = vec![y0];
    for k in 1..=3 {
        let inner = JetScalar::from_derivatives(&y)?;
        let v_at_y = inner.compose(&vy)?;
        let v_at_x = JetScalar::from_derivatives(&vxd[..k])?;
        let q = v_at_y.try_div(&v_at_x)?;
        y.push(q.derivative(k - 1));
    }
    Ok(MapJet::new(x, y[0], y[1], y[2], y[3]))
}

/// Change of variable from the profile parameter `t ∈ (0, 1)` to the transversal
/// coordinate: `x = tan(2 arccos(t/√2) - π/2)`. Sends `t → 1⁻` to `x → 0⁺`.
pub fn transversal_coordinate(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "profile parameter must lie in (0, 1), got {t}"
        )));
    }
    let x = (2.0 * (t / SQRT_2).acos() - FRAC_PI_2).tan();
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(format!(
            "transversal coordinate {x} for t = {t} leaves (0, ∞)"
        )))
    }
}

/// Inverse of [`transversal_coordinate`]: `t = √2 cos((arctan x + π/2) / 2)`.
pub fn profile_parameter(x: f64) -> f64 {
    SQRT_2 * ((x.atan() + FRAC_PI_2) / 2.0).cos()
}

/// The Reeb profile function `f(t) = f̂(tan(2 arccos(t/√2) - π/2))` near `t = 1`.
pub fn profile_to_f(profile: &ReebProfile, t: f64) -> Result<f64> {
    let x = transversal_coordinate(t)?;
    match profile.side {
        Side::Negative => hat_f(profile, -x),
        _ => hat_f(profile, x),
    }
}
